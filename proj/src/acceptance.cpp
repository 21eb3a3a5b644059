#include "homkit/acceptance.hpp"

#include "homkit/cosets.hpp"
#include "homkit/group_pipelines.hpp"
#include "homkit/hecke.hpp"
#include "homkit/linalg.hpp"
#include "homkit/verify.hpp"

#include <chrono>
#include <cstdio>
#include <random>

namespace hk::accept {

namespace {

using cox::CoxGroup;
using cox::CoxType;
using cox::Elem;
using cox::GenSet;

CoxGroup group(const std::string& name) { return CoxGroup::build(CoxType::parse(name)); }

std::vector<GenSet> proper_subsets(const CoxGroup& G) {
    std::vector<GenSet> out;
    for (GenSet I : cox::subsets_of(G.all()))
        if (I != G.all()) out.push_back(I);
    return out;
}

// Collects the first failure and a count of instances.
struct Tally {
    int instances = 0;
    std::string failure;
    std::string slowest;
    double worst = 0;

    void fail(const std::string& where, const std::string& what) {
        if (failure.empty()) failure = where + ": " + what;
    }
    void time(const std::string& where, double s) {
        if (s >= worst) {
            worst = s;
            slowest = where;
        }
    }
    Row row(int id, std::string name) const {
        Row r{id, std::move(name), failure.empty(), failure, 0};
        if (r.ok) {
            r.detail = std::to_string(instances) + " instances";
            if (!slowest.empty()) {
                char buf[64];
                std::snprintf(buf, sizeof buf, ", slowest %.2f s", worst);
                r.detail += buf;
                r.detail += " (" + slowest + ")";
            }
        }
        return r;
    }
};

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::vector<std::string>& sigma_types() {
    static const std::vector<std::string> t{"A1", "A2", "A3", "A4", "B2", "B3", "D4", "I2(3)",
                                            "I2(4)", "I2(5)", "I2(6)", "I2(7)", "I2(8)"};
    return t;
}

Row sigma_row() {
    Tally t;
    for (const auto& name : sigma_types()) {
        auto G = group(name);
        for (GenSet i0 : proper_subsets(G)) {
            std::string where = name + " I0=" + i0.to_string();
            auto t0 = std::chrono::steady_clock::now();
            try {
                cosets::CosetSystem sys(G, i0);
                auto c = cosets::build_sigma(sys, default_order(G.rank()));
                auto inv = cosets::check_sigma(sys, c);
                if (!inv.ok) t.fail(where, inv.failures.front());
                auto v = cert::verify_certificate(cert::sigma_certificate(sys, c));
                if (!v.ok) t.fail(where, "independent verification: " + v.message);
            } catch (const std::exception& e) {
                t.fail(where, e.what());
            }
            t.time(where, since(t0));
            ++t.instances;
        }
    }
    return t.row(1, "sigma contractions, triangularity, right-divisibility refinement");
}

Row tau_row() {
    Tally t;
    for (const auto& name : sigma_types()) {
        auto G = group(name);
        for (GenSet i0 : proper_subsets(G)) {
            cosets::CosetSystem sys(G, i0);
            auto rep = cosets::check_tau(sys, default_order(G.rank()));
            if (!rep.ok) t.fail(name + " I0=" + i0.to_string(), rep.failures.front());
            ++t.instances;
        }
    }
    return t.row(2, "tau^2 = 0, length and I0-set preserved");
}

Row coxeter_row() {
    Tally t;
    for (const char* name : {"A1", "A2", "A3", "A4", "B2", "B3", "I2(3)", "I2(4)", "I2(5)", "I2(6)", "I2(7)", "I2(8)"}) {
        auto G = group(name);
        auto X = cosets::coxeter_complex(G, default_order(G.rank()));
        if (auto c = verify_complex(X); !c) t.fail(name, c.describe());
        for (const auto& h : homology_int(X))
            if (!h.torsion.empty() || h.free_rank != (h.degree == 0 ? 1 : 0))
                t.fail(name, "homology is not Z in degree 0 (degree " + std::to_string(h.degree) + ")");
        ++t.instances;
    }
    return t.row(3, "Coxeter complex d^2 = 0, homology Z in degree 0");
}

// Two reduced words of w when it has two.
std::vector<std::vector<int>> two_reduced_words(const CoxGroup& G, Elem w) {
    std::vector<std::vector<int>> out;
    std::function<void(Elem, std::vector<int>&)> rec = [&](Elem x, std::vector<int>& suffix) {
        if (out.size() >= 2) return;
        if (x == G.identity()) {
            out.emplace_back(suffix.rbegin(), suffix.rend());
            return;
        }
        for (int s = 0; s < G.rank() && out.size() < 2; ++s)
            if (G.length(G.mul(x, G.gen(s))) < G.length(x)) {
                suffix.push_back(s);
                rec(G.mul(x, G.gen(s)), suffix);
                suffix.pop_back();
            }
    };
    std::vector<int> suffix;
    rec(w, suffix);
    return out;
}

hecke::HeckeElem random_elem(const CoxGroup& G, std::mt19937& rng) {
    hecke::HeckeElem x;
    std::uniform_int_distribution<int> pick(0, G.size() - 1), coef(-3, 3), pw(-2, 2);
    for (int k = 0; k < 3; ++k) {
        Laurent c = Laurent::var(0, pw(rng)) * Laurent(coef(rng)) + Laurent(coef(rng));
        x = hecke::h_add(x, hecke::h_basis(pick(rng)), c);
    }
    return x;
}

Row hecke_row(unsigned seed) {
    Tally t;
    std::mt19937 rng(seed);
    for (const char* name : {"A3", "B2"}) {
        auto G = group(name);
        hecke::HParams P(G);
        auto e = hecke::h_basis(G.identity());
        for (Elem w = 0; w < G.size(); ++w) {
            auto words = two_reduced_words(G, w);
            std::vector<hecke::HeckeElem> prods;
            for (const auto& word : words) prods.push_back(hecke::h_rmul_word(P, e, word));
            if (prods.size() == 2 && prods[0] != prods[1]) t.fail(name, "products along two reduced words differ at " + G.word_string(w));
            if (hecke::h_mul(P, hecke::h_basis(w), hecke::h_inv(P, w)) != e) t.fail(name, "h_w h_w^-1 != h_e at " + G.word_string(w));
        }
        for (int k = 0; k < 200; ++k) {
            auto x = random_elem(G, rng), y = random_elem(G, rng), z = random_elem(G, rng);
            if (hecke::h_mul(P, hecke::h_mul(P, x, y), z) != hecke::h_mul(P, x, hecke::h_mul(P, y, z)))
                t.fail(name, "associativity fails on triple " + std::to_string(k));
        }
        ++t.instances;
    }
    return t.row(4, "Hecke products well defined, associative, invertible");
}

Row remark18_row() {
    Tally t;
    std::vector<std::vector<Rational>> one{{2}, {3}, {5}}, two{{2, 3}, {3, 5}};
    for (const char* name : {"A1", "A2", "A3", "B2"}) {
        auto G = group(name);
        hecke::HParams P(G);
        auto t0 = std::chrono::steady_clock::now();
        auto r = hecke::remark18_suite(P, P.nvars() == 1 ? one : two);
        if (!r.ok()) t.fail(name, r.first_failure());
        t.time(name, since(t0));
        ++t.instances;
    }
    return t.row(5, "xi relations, rank of d^0, independence of xi h_w");
}

Row theorem17_row() {
    Tally t;
    for (const char* name : {"A2", "A3", "B2"}) {
        auto G = group(name);
        hecke::HParams P(G);
        for (GenSet i0 : proper_subsets(G)) {
            std::string where = std::string(name) + " I0=" + i0.to_string();
            auto t0 = std::chrono::steady_clock::now();
            try {
                auto res = hecke::theorem17_certificate(P, i0, default_order(G.rank()));
                if (!res.report.ok()) t.fail(where, res.report.first_failure());
                auto j = cert::equivalence_certificate(
                    res.cert, {"hecke-thm17", "hecke", name, i0, default_order(G.rank()), P.names()});
                if (auto v = cert::verify_certificate(j); !v.ok) t.fail(where, "independent verification: " + v.message);
            } catch (const std::exception& e) {
                t.fail(where, e.what());
            }
            t.time(where, since(t0));
            ++t.instances;
        }
    }
    return t.row(6, "Hecke restriction equivalences over the Laurent ring");
}

Row hecke_duality_row() {
    Tally t;
    for (const char* name : {"A1", "A2"}) {
        auto G = group(name);
        hecke::HParams P(G);
        for (int q : {2, 5}) {
            std::vector<Rational> v{Rational(q)};
            std::string where = std::string(name) + " q=" + std::to_string(q);
            auto r = hecke::duality_homology_check(P, v);
            for (int k = 0; k < static_cast<int>(r.ranks.size()); ++k) {
                int deg = r.lo + k;
                if (r.ranks[k] != (deg == 0 ? G.size() : 0)) t.fail(where, "rank " + std::to_string(r.ranks[k]) + " in degree " + std::to_string(deg));
            }
            if (!r.ok) t.fail(where, "duality check failed");
            ++t.instances;
        }
    }
    return t.row(7, "Hecke duality homology |W| in degree 0");
}

const std::vector<std::string>& groups() {
    static const std::vector<std::string> g{"GL2(2)", "SL2(3)", "GL3(2)"};
    return g;
}

Row steinberg_row() {
    Tally t;
    for (const auto& name : groups()) {
        auto bn = bn::BNPair::build(name);
        for (bool minus : {false, true}) {
            std::string where = name + (minus ? " minus" : " plus");
            auto X = bn::st_complex(*bn, minus, default_order(bn->weyl().rank()));
            if (auto c = verify_complex(X); !c) t.fail(where, c.describe());
            // Euler characteristic of the coset counts
            long chi = 0;
            for (int deg = X.lo; deg <= X.hi(); ++deg) chi += (deg % 2 ? -1 : 1) * X.dim(deg);
            if (chi != static_cast<long>(bn->U().size())) t.fail(where, "Euler characteristic is not |U|");
            for (const auto& h : homology_int(X))
                if (!h.torsion.empty() || h.free_rank != (h.degree == 0 ? static_cast<int>(bn->U().size()) : 0))
                    t.fail(where, "homology not free of rank |U| in degree 0");
            ++t.instances;
        }
    }
    return t.row(8, "Steinberg complexes: homology free of rank |U| in degree 0");
}

Row theorem20_row() {
    Tally t;
    for (const auto& name : groups()) {
        auto bn = bn::BNPair::build(name);
        const int n = bn->weyl().rank();
        for (GenSet i0 : proper_subsets(bn->weyl())) {
            std::string where = name + " I0=" + i0.to_string();
            auto t0 = std::chrono::steady_clock::now();
            try {
                auto res = bn::theorem20_certificate(*bn, i0, default_order(n));
                if (!res.report.ok()) t.fail(where, res.report.first_failure());
                auto j = cert::equivalence_certificate(res.cert, {"bn-thm20", "group", name, i0, default_order(n), {}});
                if (auto v = cert::verify_certificate(j); !v.ok) t.fail(where, "independent verification: " + v.message);
            } catch (const std::exception& e) {
                t.fail(where, e.what());
            }
            t.time(where, since(t0));
            ++t.instances;
        }
    }
    return t.row(9, "Steinberg restriction equivalences over Z");
}

Row prop10_row() {
    Tally t;
    auto bn = bn::BNPair::build("GL3(2)");
    auto r = bn::prop10_check(*bn);
    if (!r.ok()) t.fail("GL3(2)", r.first_failure());
    auto row = t.row(10, "idempotent product identities in QG for GL3(2)");
    if (row.ok && !r.items.empty()) row.detail = r.items.back().name;
    return row;
}

Row theorem9_row() {
    Tally t;
    struct Inst {
        const char* name;
        GenSet i0;
    };
    for (const auto& [name, i0] : {Inst{"GL2(2)", GenSet()}, Inst{"SL2(3)", GenSet()}, Inst{"GL3(2)", GenSet::single(0)},
                                   Inst{"GL3(2)", GenSet::single(1)}}) {
        auto bn = bn::BNPair::build(name);
        const int n = bn->weyl().rank();
        std::string where = std::string(name) + " I0=" + i0.to_string();
        auto t0 = std::chrono::steady_clock::now();
        try {
            auto res = bn::theorem9_certificate(*bn, i0, default_order(n));
            if (!res.report.ok()) t.fail(where, res.report.first_failure());
            auto j = cert::equivalence_certificate(res.cert, {"bn-thm9", "group", name, i0, default_order(n), {}});
            if (auto v = cert::verify_certificate(j); !v.ok) t.fail(where, "independent verification: " + v.message);
        } catch (const std::exception& e) {
            t.fail(where, e.what());
        }
        t.time(where, since(t0));
        ++t.instances;
    }
    return t.row(11, "X(G) e_I0 equivalences over Q");
}

Row group_duality_row(unsigned seed) {
    Tally t;
    for (const char* name : {"GL2(2)", "SL2(3)"}) {
        auto bn = bn::BNPair::build(name);
        auto t0 = std::chrono::steady_clock::now();
        auto r = bn::group_duality_check(*bn, 5, seed);
        if (!r.ok) t.fail(name, r.report.first_failure().empty() ? "duality check failed" : r.report.first_failure());
        for (int k = 0; k < static_cast<int>(r.ranks.size()); ++k) {
            int deg = r.lo + k;
            if (r.ranks[k] != (deg == 0 ? bn->group().size() : 0)) t.fail(name, "rank in degree " + std::to_string(deg));
        }
        t.time(name, since(t0));
        ++t.instances;
    }
    return t.row(12, "group duality homology |G| in degree 0");
}

Row certificate_row(unsigned seed) {
    Tally t;
    std::vector<std::pair<std::string, std::function<cert::json()>>> makers;
    makers.emplace_back("sigma A2 I0={2}", [] {
        auto G = group("A2");
        cosets::CosetSystem sys(G, GenSet::single(1));
        return cert::sigma_certificate(sys, cosets::build_sigma(sys, default_order(2)));
    });
    makers.emplace_back("sigma B3 I0={1}", [] {
        auto G = group("B3");
        cosets::CosetSystem sys(G, GenSet::single(0));
        return cert::sigma_certificate(sys, cosets::build_sigma(sys, default_order(3)));
    });
    makers.emplace_back("hecke A2 I0={1}", [] {
        auto G = group("A2");
        hecke::HParams P(G);
        auto res = hecke::theorem17_certificate(P, GenSet::single(0), default_order(2));
        return cert::equivalence_certificate(res.cert, {"hecke-thm17", "hecke", "A2", GenSet::single(0), default_order(2), P.names()});
    });
    makers.emplace_back("steinberg GL3(2) I0={2}", [] {
        auto bn = bn::BNPair::build("GL3(2)");
        auto res = bn::theorem20_certificate(*bn, GenSet::single(1), default_order(2));
        return cert::equivalence_certificate(res.cert, {"bn-thm20", "group", "GL3(2)", GenSet::single(1), default_order(2), {}});
    });
    makers.emplace_back("X(G) SL2(3) I0={}", [] {
        auto bn = bn::BNPair::build("SL2(3)");
        auto res = bn::theorem9_certificate(*bn, GenSet(), default_order(1));
        return cert::equivalence_certificate(res.cert, {"bn-thm9", "group", "SL2(3)", GenSet(), default_order(1), {}});
    });
    unsigned k = 0;
    for (const auto& [where, make] : makers) {
        auto j = make();
        auto text = cert::dump(j);
        if (cert::dump(make()) != text) t.fail(where, "output not byte-identical across runs");
        auto back = cert::json::parse(text);
        if (cert::dump(back) != text) t.fail(where, "round trip changes the text");
        if (auto v = cert::verify_certificate(back); !v.ok) t.fail(where, v.message);
        auto f = cert::fuzz(back, 100, seed + k++);
        if (f.rejected != f.trials || f.trials != 100) t.fail(where, "perturbation accepted: " + f.first_survivor);
        ++t.instances;
    }
    return t.row(13, "certificate round trip, determinism, 100 perturbations rejected");
}

} // namespace

std::vector<Row> run_acceptance(const Config& cfg, const std::function<void(const Row&)>& on_row) {
    std::vector<std::function<Row()>> steps{
        sigma_row,
        tau_row,
        coxeter_row,
        [&] { return hecke_row(cfg.seed); },
        remark18_row,
        theorem17_row,
        hecke_duality_row,
        steinberg_row,
        theorem20_row,
        prop10_row,
        theorem9_row,
        [&] { return group_duality_row(cfg.seed); },
        [&] { return certificate_row(cfg.seed); },
    };
    std::vector<Row> rows;
    for (auto& step : steps) {
        auto t0 = std::chrono::steady_clock::now();
        Row r;
        try {
            r = step();
        } catch (const std::exception& e) {
            r = Row{static_cast<int>(rows.size()) + 1, "criterion", false, e.what(), 0};
        }
        r.seconds = since(t0);
        if (on_row) on_row(r);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string format_row(const Row& r) {
    char head[96];
    std::snprintf(head, sizeof head, "%-4s %2d  %7.2fs  ", r.ok ? "PASS" : "FAIL", r.id, r.seconds);
    return head + r.name + (r.detail.empty() ? "" : "  [" + r.detail + "]");
}

} // namespace hk::accept
