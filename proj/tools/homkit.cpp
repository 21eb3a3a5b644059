#include "homkit/acceptance.hpp"
#include "homkit/cosets.hpp"
#include "homkit/group_pipelines.hpp"
#include "homkit/hecke.hpp"
#include "homkit/linalg.hpp"
#include "homkit/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace hk;
using cert::json;
using cox::GenSet;

namespace {

// Bad command-line values; reported with exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Opts {
    std::string target;
    std::string i0;
    std::string order;
    std::vector<std::string> q;
    std::string out;
    bool json = false;
    bool slow = false;
    bool minus = false;
    bool fast = false;
    unsigned seed = 0;
};

std::vector<int> parse_list(const std::string& text, int rank, const char* what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        int s = 0;
        try {
            std::size_t used = 0;
            s = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string("bad ") + what + " entry '" + item + "'");
        }
        if (s < 1 || s > rank) throw UsageError(std::string(what) + " entry " + item + " out of range 1.." + std::to_string(rank));
        out.push_back(s - 1);
    }
    return out;
}

GenSet parse_i0(const Opts& o, int rank) {
    GenSet I;
    for (int s : parse_list(o.i0, rank, "--i0")) {
        if (I.contains(s)) throw UsageError("--i0 repeats a generator");
        I = I.with(s);
    }
    if (I == GenSet::full(rank)) throw UsageError("--i0 must be a proper subset of S");
    return I;
}

Order parse_order_opt(const Opts& o, int rank) {
    if (o.order.empty()) return default_order(rank);
    auto out = parse_list(o.order, rank, "--order");
    GenSet seen;
    for (int s : out) seen = seen.with(s);
    if (static_cast<int>(out.size()) != rank || seen.size() != rank) throw UsageError("--order must list each generator once");
    return out;
}

cox::CoxGroup coxeter_group(const std::string& name) {
    try {
        return cox::CoxGroup::build(cox::CoxType::parse(name));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::unique_ptr<bn::BNPair> bn_pair(const std::string& name) {
    try {
        return bn::BNPair::build(name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::vector<std::vector<Rational>> specializations(const Opts& o, const hecke::HParams& P,
                                                   std::vector<std::vector<Rational>> fallback) {
    if (o.q.empty()) return fallback;
    std::vector<std::vector<Rational>> out;
    for (const auto& text : o.q) {
        try {
            out.push_back(P.parse_values(text));
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--q: ") + e.what());
        }
    }
    return out;
}

std::vector<std::vector<Rational>> default_points(const hecke::HParams& P) {
    if (P.nvars() == 1) return {{2}, {3}, {5}};
    return {{2, 3}, {3, 5}};
}

std::string point_string(const std::vector<Rational>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + scalar_string(x);
    return s;
}

void write_out(const Opts& o, const json& j) {
    auto text = cert::dump(j);
    if (o.out.empty()) {
        if (o.json) std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + o.out);
    f << text;
}

// Prints a report; the exit code is 0 iff every item passed.
int finish(const Opts& o, const std::string& title, const Report& r, json extra = json::object()) {
    if (o.json && o.out.empty()) {
        json items = json::array();
        for (const auto& it : r.items) items.push_back({{"name", it.name}, {"ok", it.ok}, {"detail", it.detail}});
        extra["title"] = title;
        extra["ok"] = r.ok();
        extra["checks"] = std::move(items);
        std::cout << cert::dump(extra);
    } else {
        std::cout << title << "\n";
        for (const auto& it : r.items)
            std::cout << "  " << (it.ok ? "ok   " : "FAIL ") << it.name << (it.detail.empty() ? "" : ": " + it.detail) << "\n";
        std::cout << (r.ok() ? "all checks passed\n" : "FAILED: " + r.first_failure() + "\n");
    }
    return r.ok() ? 0 : 1;
}

template <class R> std::string dims_string(const Complex<R>& X) {
    std::string s;
    for (int d = X.lo; d <= X.hi(); ++d) s += (s.empty() ? "" : " ") + std::to_string(X.dim(d));
    return "degrees " + std::to_string(X.lo) + ".." + std::to_string(X.hi()) + ", dims " + s;
}

void add_int_homology(Report& r, const Complex<Integer>& X, const std::string& prefix) {
    for (const auto& h : homology_int(X)) {
        std::string t;
        for (const auto& f : h.torsion) t += " Z/" + f.get_str();
        r.add(prefix + "H^" + std::to_string(h.degree) + " = Z^" + std::to_string(h.free_rank) + (t.empty() ? "" : " +" + t), true);
    }
}

void add_ranks(Report& r, const Complex<Rational>& X, const std::string& prefix) {
    auto ranks = homology_ranks(X);
    for (std::size_t k = 0; k < ranks.size(); ++k)
        r.add(prefix + "H^" + std::to_string(X.lo + static_cast<int>(k)) + " rank " + std::to_string(ranks[k]), true);
}

int cmd_sigma(const Opts& o) {
    auto G = coxeter_group(o.target);
    GenSet i0 = parse_i0(o, G.rank());
    cosets::CosetSystem sys(G, i0);
    auto c = cosets::build_sigma(sys, parse_order_opt(o, G.rank()));
    auto inv = cosets::check_sigma(sys, c);
    auto j = cert::sigma_certificate(sys, c);
    write_out(o, j);
    Report r;
    r.add("Z A(I0)+ " + dims_string(c.plus.complex), true);
    r.add(std::to_string(c.m.size()) + " nonzero m-coefficients, " + std::to_string(c.iterations) + " series terms", true);
    r.add("sigma d + d sigma = Id, triangularity, right-divisibility refinement", inv.ok,
          inv.ok ? "" : inv.failures.front());
    auto v = cert::verify_certificate(j);
    r.add("independent re-verification of the certificate", v.ok, v.message);
    if (o.json && o.out.empty()) return r.ok() ? 0 : 1; // the certificate itself went to stdout
    return finish(o, "sigma " + o.target + " I0=" + i0.to_string(), r);
}

int cmd_verify(const Opts& o) {
    std::ifstream f(o.target, std::ios::binary);
    if (!f) throw UsageError("cannot read " + o.target);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        std::cout << "FAIL: not JSON: " << e.what() << "\n";
        return 1;
    }
    auto v = cert::verify_certificate(j);
    if (o.json) {
        std::cout << cert::dump({{"ok", v.ok}, {"message", v.message}});
    } else if (v.ok) {
        std::cout << "ok: " << j.value("kind", "") << " certificate for " << j.value("group", "") << " verified\n";
    } else {
        std::cout << "FAIL: " << v.message << "\n";
    }
    return v.ok ? 0 : 1;
}

int cmd_coxeter_complex(const Opts& o) {
    auto G = coxeter_group(o.target);
    auto X = cosets::coxeter_complex(G, parse_order_opt(o, G.rank()));
    Report r;
    r.add(dims_string(X), true);
    r.add("d^2 = 0", verify_complex(X));
    add_int_homology(r, X, "");
    return finish(o, "Coxeter complex of " + o.target, r);
}

int cmd_hecke_x(const Opts& o) {
    auto G = coxeter_group(o.target);
    hecke::HParams P(G);
    auto M = hecke::build_XH(P, parse_order_opt(o, G.rank()));
    Report r;
    r.add(dims_string(M.X), true);
    r.add("d^2 = 0", verify_complex(M.X));
    for (const auto& pt : specializations(o, P, {{2}}))
        add_ranks(r, specialize(M.X, pt), "at " + point_string(pt) + ": ");
    return finish(o, "X(H) for " + o.target, r);
}

int cmd_hecke_remark18(const Opts& o) {
    auto G = coxeter_group(o.target);
    hecke::HParams P(G);
    auto r = hecke::remark18_suite(P, specializations(o, P, default_points(P)));
    return finish(o, "xi suite for " + o.target, r);
}

int cmd_hecke_thm17(const Opts& o) {
    auto G = coxeter_group(o.target);
    hecke::HParams P(G);
    GenSet i0 = parse_i0(o, G.rank());
    Order order = parse_order_opt(o, G.rank());
    auto res = hecke::theorem17_certificate(P, i0, order);
    auto j = cert::equivalence_certificate(res.cert, {"hecke-thm17", "hecke", o.target, i0, order, P.names()});
    if (!o.out.empty()) write_out(o, j);
    auto v = cert::verify_certificate(j);
    res.report.add("independent re-verification of the certificate", v.ok, v.message);
    return finish(o, "H restriction equivalence for " + o.target + " I0=" + i0.to_string(), res.report);
}

int cmd_hecke_duality(const Opts& o) {
    auto G = coxeter_group(o.target);
    hecke::HParams P(G);
    Report r;
    for (const auto& pt : specializations(o, P, P.nvars() == 1 ? std::vector<std::vector<Rational>>{{2}, {5}}
                                                                 : std::vector<std::vector<Rational>>{{2, 3}, {5, 7}})) {
        auto d = hecke::duality_homology_check(P, pt);
        std::string ranks;
        for (std::size_t k = 0; k < d.ranks.size(); ++k)
            ranks += " H^" + std::to_string(d.lo + static_cast<int>(k)) + "=" + std::to_string(d.ranks[k]);
        r.add("at " + point_string(pt) + ":" + ranks, d.ok, d.ok ? "" : "expected |W| in degree 0 only");
    }
    return finish(o, "X(H) (x)_H X(H)^dual for " + o.target, r);
}

int cmd_bn_st(const Opts& o) {
    auto bn = bn_pair(o.target);
    auto X = bn::st_complex(*bn, o.minus, parse_order_opt(o, bn->weyl().rank()));
    Report r;
    r.add(dims_string(X), true);
    r.add("d^2 = 0", verify_complex(X));
    add_int_homology(r, X, "");
    r.add("|U| = " + std::to_string(bn->U().size()), true);
    return finish(o, std::string("Steinberg complex of ") + o.target + (o.minus ? " (opposite parabolics)" : ""), r);
}

int cmd_bn_thm20(const Opts& o) {
    auto bn = bn_pair(o.target);
    const int n = bn->weyl().rank();
    GenSet i0 = parse_i0(o, n);
    Order order = parse_order_opt(o, n);
    auto res = bn::theorem20_certificate(*bn, i0, order);
    auto j = cert::equivalence_certificate(res.cert, {"bn-thm20", "group", o.target, i0, order, {}});
    if (!o.out.empty()) write_out(o, j);
    auto v = cert::verify_certificate(j);
    res.report.add("independent re-verification of the certificate", v.ok, v.message);
    return finish(o, "Steinberg restriction to P_I0 for " + o.target + " I0=" + i0.to_string(), res.report);
}

int cmd_bn_thm9(const Opts& o) {
    auto bn = bn_pair(o.target);
    const int n = bn->weyl().rank();
    GenSet i0 = parse_i0(o, n);
    Order order = parse_order_opt(o, n);
    auto res = bn::theorem9_certificate(*bn, i0, order);
    auto j = cert::equivalence_certificate(res.cert, {"bn-thm9", "group", o.target, i0, order, {}});
    if (!o.out.empty()) write_out(o, j);
    auto v = cert::verify_certificate(j);
    res.report.add("independent re-verification of the certificate", v.ok, v.message);
    return finish(o, "X(G) e_I0 equivalence for " + o.target + " I0=" + i0.to_string(), res.report);
}

int cmd_bn_duality(const Opts& o) {
    auto bn = bn_pair(o.target);
    auto d = bn::group_duality_check(*bn, 5, o.seed);
    Report r = d.report;
    std::string ranks;
    for (std::size_t k = 0; k < d.ranks.size(); ++k)
        ranks += " H^" + std::to_string(d.lo + static_cast<int>(k)) + "=" + std::to_string(d.ranks[k]);
    r.add("ranks:" + ranks, d.ok, d.ok ? "" : "expected |G| in degree 0 only");
    return finish(o, "X(G) (x)_G X(G)^dual for " + o.target, r);
}

// A Coxeter type, a group, or a certificate file.
int cmd_homology(const Opts& o) {
    Report r;
    if (bn::is_group_spec(o.target)) {
        auto bn = bn_pair(o.target);
        auto X = bn::st_complex(*bn, o.minus, parse_order_opt(o, bn->weyl().rank()));
        add_int_homology(r, X, "");
        return finish(o, "homology of the Steinberg complex of " + o.target, r);
    }
    std::ifstream f(o.target, std::ios::binary);
    if (!f) {
        auto G = coxeter_group(o.target);
        add_int_homology(r, cosets::coxeter_complex(G, parse_order_opt(o, G.rank())), "");
        return finish(o, "homology of the Coxeter complex of " + o.target, r);
    }
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw UsageError(std::string("not JSON: ") + e.what());
    }
    auto v = cert::verify_certificate(j);
    r.add("certificate verifies", v.ok, v.message);
    if (!v.ok) return finish(o, "homology of " + o.target, r);
    const auto& basis = j.at("basis");
    const auto& maps = j.at("maps");
    auto load = [&](const json& b, const json& d, const cert::Names& names, auto tag) {
        using R = decltype(tag);
        Complex<R> X;
        X.lo = b.at("lo").get<int>();
        for (const auto& l : b.at("degrees")) X.modules.push_back({l.get<std::vector<std::string>>()});
        for (const auto& m : d) X.diffs.push_back(cert::matrix_from_json<R>(m, names));
        return X;
    };
    if (j.at("kind") == "contraction") {
        add_int_homology(r, load(basis, maps.at("d"), {}, Integer()), "");
    } else {
        auto names = j.at("names").get<cert::Names>();
        auto ring = j.at("ring").get<std::string>();
        for (const char* which : {"Y", "Yp"}) {
            std::string prefix = std::string(which) + ": ";
            const auto& b = basis.at(which);
            const auto& d = maps.at(std::string("d_") + which);
            if (ring == "integer") {
                add_int_homology(r, load(b, d, names, Integer()), prefix);
            } else if (ring == "rational") {
                add_ranks(r, load(b, d, names, Rational()), prefix);
            } else {
                auto G = coxeter_group(j.at("group").get<std::string>());
                hecke::HParams P(G);
                auto X = load(b, d, names, Laurent());
                for (const auto& pt : specializations(o, P, {default_points(P).front()}))
                    add_ranks(r, specialize(X, pt), prefix + "at " + point_string(pt) + ": ");
            }
        }
    }
    return finish(o, "homology of " + o.target, r);
}

int cmd_accept(const Opts& o) {
    accept::Config cfg{o.slow, o.seed};
    json rows = json::array();
    auto all = accept::run_acceptance(cfg, [&](const accept::Row& r) {
        if (o.json) rows.push_back({{"id", r.id}, {"name", r.name}, {"ok", r.ok}, {"detail", r.detail}, {"seconds", r.seconds}});
        else std::cout << accept::format_row(r) << std::endl;
    });
    bool ok = true;
    for (const auto& r : all) ok = ok && r.ok;
    if (o.json) std::cout << cert::dump({{"ok", ok}, {"criteria", rows}});
    else std::cout << (ok ? "all criteria passed\n" : "some criteria FAILED\n");
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certificates for coset complexes, Hecke algebras and finite BN-pairs"};
    app.require_subcommand(1);
    Opts o;
    using Fn = int (*)(const Opts&);
    std::vector<std::pair<CLI::App*, Fn>> cmds;

    auto add = [&](const char* name, const char* help, Fn fn, const char* target_help) {
        auto* sub = app.add_subcommand(name, help);
        if (target_help) sub->add_option("target", o.target, target_help)->required();
        sub->add_flag("--json", o.json, "machine-readable output");
        cmds.emplace_back(sub, fn);
        return sub;
    };
    auto with_i0 = [&](CLI::App* s) { s->add_option("--i0", o.i0, "I0 as 1-based generators, e.g. 1,3")->default_str(""); };
    auto with_order = [&](CLI::App* s) { s->add_option("--order", o.order, "total order on S, e.g. 2,1"); };
    auto with_out = [&](CLI::App* s) { s->add_option("--out", o.out, "write the certificate here"); };
    auto with_q = [&](CLI::App* s) { s->add_option("--q", o.q, "specialization, e.g. 2 or 2,3 (repeatable)"); };

    auto* sigma = add("sigma", "contraction of Z A(I0)+ with its m-coefficients", cmd_sigma, "Coxeter type, e.g. A3");
    with_i0(sigma);
    with_order(sigma);
    with_out(sigma);
    add("verify", "re-check a certificate file from scratch", cmd_verify, "certificate path");
    with_order(add("coxeter-complex", "Coxeter complex and its homology", cmd_coxeter_complex, "Coxeter type"));
    auto* hx = add("hecke-x", "the complex X(H)", cmd_hecke_x, "Coxeter type");
    with_order(hx);
    with_q(hx);
    with_q(add("hecke-remark18", "xi relations and rank checks", cmd_hecke_remark18, "Coxeter type"));
    auto* h17 = add("hecke-thm17", "restriction of X(H) to H (x) H_I0^op", cmd_hecke_thm17, "Coxeter type");
    with_i0(h17);
    with_order(h17);
    with_out(h17);
    with_q(add("hecke-duality", "homology of X(H) (x)_H X(H)^dual", cmd_hecke_duality, "Coxeter type"));
    auto* st = add("bn-st", "Steinberg complex", cmd_bn_st, "group, e.g. GL3(2)");
    with_order(st);
    st->add_flag("--minus", o.minus, "use the opposite parabolics");
    auto* t20 = add("bn-thm20", "restriction of St(G) to P_I0", cmd_bn_thm20, "group");
    with_i0(t20);
    with_order(t20);
    with_out(t20);
    auto* t9 = add("bn-thm9", "X(G) e_I0 against the Levi side", cmd_bn_thm9, "group");
    with_i0(t9);
    with_order(t9);
    with_out(t9);
    t9->add_flag("--slow", o.slow, "accepted for compatibility; every supported instance runs");
    add("bn-duality", "homology of X(G) (x)_G X(G)^dual", cmd_bn_duality, "group")->add_option("--seed", o.seed, "seed for the character spot checks");
    auto* hom = add("homology", "homology of a Coxeter complex, a Steinberg complex or a certificate", cmd_homology,
                    "Coxeter type, group or certificate path");
    with_order(hom);
    with_q(hom);
    hom->add_flag("--minus", o.minus, "opposite parabolics for a group");
    auto* acc = add("accept", "run the acceptance criteria", cmd_accept, nullptr);
    acc->add_flag("--fast", o.fast, "the default suite");
    acc->add_flag("--slow", o.slow, "also accepted; the default suite already includes every instance");
    acc->add_option("--seed", o.seed, "seed for randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }
    for (const auto& [sub, fn] : cmds) {
        if (!sub->parsed()) continue;
        try {
            return fn(o);
        } catch (const UsageError& e) {
            std::cerr << "error: " << e.what() << "\n\n" << sub->help();
            return 2;
        } catch (const VerificationError& e) {
            std::cout << "FAIL: " << e.what() << "\n";
            return 1;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return 2;
}
