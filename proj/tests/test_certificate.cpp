#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homkit/group_pipelines.hpp"
#include "homkit/hecke.hpp"
#include "homkit/verify.hpp"

using namespace hk;
using cert::json;

namespace {

json sigma_json(const char* type, GenSet i0) {
    auto G = cox::CoxGroup::build(cox::CoxType::parse(type));
    cosets::CosetSystem sys(G, i0);
    auto c = cosets::build_sigma(sys, default_order(G.rank()));
    return cert::sigma_certificate(sys, c);
}

json hecke_json(const char* type, GenSet i0) {
    auto G = cox::CoxGroup::build(cox::CoxType::parse(type));
    hecke::HParams P(G);
    auto res = hecke::theorem17_certificate(P, i0, default_order(G.rank()));
    REQUIRE(res.report.ok());
    return cert::equivalence_certificate(res.cert, {"hecke-thm17", "hecke", type, i0, default_order(G.rank()), P.names()});
}

void round_trip_and_fuzz(const json& j, unsigned seed) {
    auto text = cert::dump(j);
    auto back = json::parse(text);
    CHECK(cert::dump(back) == text);
    auto v = cert::verify_certificate(back);
    INFO(v.message);
    CHECK(v.ok);
    auto f = cert::fuzz(back, 100, seed);
    INFO(f.first_survivor);
    CHECK(f.trials == 100);
    CHECK(f.rejected == 100);
}

} // namespace

TEST_CASE("sigma certificate round trip and fuzz") {
    round_trip_and_fuzz(sigma_json("A2", GenSet::single(1)), 0);
    round_trip_and_fuzz(sigma_json("B3", GenSet(0b011)), 1);
    round_trip_and_fuzz(sigma_json("I2(5)", GenSet()), 2);
}

TEST_CASE("sigma certificate rejections name the basis element") {
    auto j = sigma_json("A2", GenSet::single(1));
    REQUIRE(!j["mcoeffs"].empty());
    auto bad = j;
    auto& e = bad["mcoeffs"][0];
    e[2] = scalar_string(Integer(parse_integer(e[2].get<std::string>()) + 1));
    auto v = cert::verify_certificate(bad);
    CHECK(!v.ok);
    CHECK(v.message.find("sigma d + d sigma != Id") != std::string::npos);
    CHECK(v.message.find('|') != std::string::npos); // a coset label

    auto relabel = j;
    relabel["basis"]["degrees"][0][0] = "{}|s1s2s1";
    CHECK(!cert::verify_certificate(relabel).ok);
    auto wrong_group = j;
    wrong_group["group"] = "B2";
    CHECK(!cert::verify_certificate(wrong_group).ok);
    auto wrong_order = j;
    wrong_order["order_conj"] = json::array({1, 2});
    CHECK(!cert::verify_certificate(wrong_order).ok);
    CHECK(!cert::verify_certificate(json::parse(R"({"kind":"contraction"})")).ok);
    CHECK(!cert::verify_certificate(json::parse("[1,2]")).ok);
}

TEST_CASE("sigma certificate output is deterministic") {
    CHECK(cert::dump(sigma_json("A3", GenSet::single(0))) == cert::dump(sigma_json("A3", GenSet::single(0))));
}

TEST_CASE("Laurent equivalence certificates") {
    round_trip_and_fuzz(hecke_json("A2", GenSet::single(0)), 3);
    round_trip_and_fuzz(hecke_json("B2", GenSet()), 4);
}

TEST_CASE("group equivalence certificates") {
    auto bn = bn::BNPair::build("GL3(2)");
    auto r20 = bn::theorem20_certificate(*bn, GenSet::single(0), default_order(2));
    REQUIRE(r20.report.ok());
    round_trip_and_fuzz(cert::equivalence_certificate(r20.cert, {"bn-thm20", "group", "GL3(2)", GenSet::single(0),
                                                                 default_order(2), {}}),
                        5);
    auto small = bn::BNPair::build("GL2(2)");
    auto r9 = bn::theorem9_certificate(*small, GenSet(), default_order(1));
    REQUIRE(r9.report.ok());
    round_trip_and_fuzz(
        cert::equivalence_certificate(r9.cert, {"bn-thm9", "group", "GL2(2)", GenSet(), default_order(1), {}}), 6);
}

TEST_CASE("perturbation of a vanishing entry drops it") {
    auto j = sigma_json("A1", GenSet());
    std::size_t n = cert::perturbable_entries(j);
    REQUIRE(n > 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto p = cert::perturb_one(j, i);
        CHECK(p != j);
        CHECK(!cert::verify_certificate(p).ok);
    }
}
