#include "homkit/verify.hpp"

#include <functional>
#include <optional>
#include <random>
#include <set>

namespace hk::cert {

namespace {

using cox::CoxGroup;
using cox::Elem;
using cox::GenSet;

json gens_json(GenSet I) {
    json out = json::array();
    for (int s : I.members()) out.push_back(s + 1);
    return out;
}

json order_json(const Order& order) {
    json out = json::array();
    for (int s : order) out.push_back(s + 1);
    return out;
}

GenSet parse_gens(const json& j, int rank) {
    if (!j.is_array()) throw FormatError("generator list must be an array");
    GenSet I;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw FormatError("generator must be an integer");
        int s = v.get<int>() - 1;
        if (s < 0 || s >= rank || I.contains(s)) throw FormatError("bad generator " + v.dump());
        I = I.with(s);
    }
    return I;
}

Order parse_order(const json& j, int rank) {
    Order out;
    GenSet seen = parse_gens(j, rank);
    if (seen.size() != rank) throw FormatError("order must list every generator once");
    for (const auto& v : j) out.push_back(v.get<int>() - 1);
    return out;
}

template <class R> json basis_json(const Complex<R>& x) {
    json degrees = json::array();
    for (const auto& m : x.modules) degrees.push_back(m.labels);
    return {{"lo", x.lo}, {"degrees", std::move(degrees)}};
}

template <class R> json diffs_json(const Complex<R>& x, const Names& names) {
    json out = json::array();
    for (const auto& d : x.diffs) out.push_back(matrix_to_json(d, names));
    return out;
}

template <class R> Complex<R> complex_from(const json& basis, const json& diffs, const Names& names) {
    Complex<R> x;
    x.lo = basis.at("lo").get<int>();
    for (const auto& b : basis.at("degrees")) x.modules.push_back({b.get<std::vector<std::string>>()});
    for (const auto& d : diffs) x.diffs.push_back(matrix_from_json<R>(d, names));
    if (x.modules.empty() ? !x.diffs.empty() : x.diffs.size() + 1 != x.modules.size())
        throw FormatError("complex needs one differential between consecutive degrees");
    return x;
}

// Every stored block sits between existing degrees with the right shape.
template <class R> Check block_shapes(const GradedMap<R>& f, const Complex<R>& x, const Complex<R>& y, const char* name) {
    for (const auto& [deg, m] : f.blocks) {
        if (!x.in_range(deg) || !y.in_range(deg + f.shift))
            return Check::fail(std::string(name) + " has a block outside the complexes", deg);
        if (m.cols() != x.dim(deg) || m.rows() != y.dim(deg + f.shift))
            return Check::fail(std::string(name) + " block has wrong shape", deg);
    }
    return Check::pass();
}

template <class R> json equivalence_json(const EquivCert<R>& c, const EquivMeta& meta, const char* ring) {
    json basis = {{"Y", basis_json(c.Y)}, {"Yp", basis_json(c.Yp)}};
    json maps = {{"d_Y", diffs_json(c.Y, meta.names)},
                 {"d_Yp", diffs_json(c.Yp, meta.names)},
                 {"p", graded_to_json(c.p, meta.names)},
                 {"g", graded_to_json(c.g, meta.names)},
                 {"k", graded_to_json(c.k, meta.names)}};
    return {{"kind", "equivalence"},
            {"pipeline", meta.pipeline},
            {"algebra", meta.algebra},
            {"ring", ring},
            {"group", meta.group},
            {"i0", gens_json(meta.i0)},
            {"order", order_json(meta.order)},
            {"names", meta.names},
            {"basis", std::move(basis)},
            {"maps", std::move(maps)}};
}

template <class R> Verdict check_equivalence_json(const json& j, const Names& names) {
    const auto& basis = j.at("basis");
    const auto& maps = j.at("maps");
    EquivCert<R> c;
    c.Y = complex_from<R>(basis.at("Y"), maps.at("d_Y"), names);
    c.Yp = complex_from<R>(basis.at("Yp"), maps.at("d_Yp"), names);
    c.p = graded_from_json<R>(maps.at("p"), names);
    c.g = graded_from_json<R>(maps.at("g"), names);
    c.k = graded_from_json<R>(maps.at("k"), names);
    auto fail = [](const std::string& what, const Check& r) { return Verdict{false, what + ": " + r.describe()}; };
    if (c.p.shift != 0 || c.g.shift != 0 || c.k.shift != -1) return {false, "equivalence maps have wrong degrees"};
    if (auto r = block_shapes(c.p, c.Y, c.Yp, "p"); !r) return fail("shape", r);
    if (auto r = block_shapes(c.g, c.Yp, c.Y, "g"); !r) return fail("shape", r);
    if (auto r = block_shapes(c.k, c.Y, c.Y, "k"); !r) return fail("shape", r);
    if (auto r = verify_equivalence(c); !r) return fail("equivalence", r);
    GradedMap<R> zero{-1, {}};
    auto pk = compose(c.p, c.k, c.Y, c.Y, c.Yp);
    if (auto r = detail::check_identity(pk, zero, c.Y, c.Yp, "p k != 0"); !r) return fail("side condition", r);
    auto kg = compose(c.k, c.g, c.Yp, c.Y, c.Y);
    if (auto r = detail::check_identity(kg, zero, c.Yp, c.Y, "k g != 0"); !r) return fail("side condition", r);
    return {};
}

// The cosets W_I d of W by brute force from group multiplication and lengths.
struct CosetData {
    GenSet I;
    Elem d = 0;
    bool plus = false;
};

std::string label_of(const CoxGroup& G, GenSet I, Elem d) { return I.to_string() + "|" + G.word_string(d); }

// Minimal-length element of W_I x.
Elem min_in_coset(const CoxGroup& G, GenSet I, Elem x) {
    Elem best = x;
    for (Elem u : G.parabolic(I)) {
        Elem y = G.mul(u, x);
        if (G.length(y) < G.length(best)) best = y;
    }
    return best;
}

bool no_right_descent(const CoxGroup& G, Elem x, GenSet J) {
    for (int t : J.members())
        if (G.length(G.mul(x, G.gen(t))) < G.length(x)) return false;
    return true;
}

std::map<std::string, CosetData> enumerate_cosets(const CoxGroup& G, GenSet i0) {
    std::map<std::string, CosetData> out;
    for (GenSet I : cox::subsets_of(G.all())) {
        std::vector<char> seen(G.size(), 0);
        const auto& WI = G.parabolic(I);
        for (Elem w = 0; w < G.size(); ++w) {
            if (seen[w]) continue;
            CosetData c{I, w, false};
            bool meets = false, inside = true;
            for (Elem u : WI) {
                Elem x = G.mul(u, w);
                seen[x] = 1;
                if (G.length(x) < G.length(c.d)) c.d = x;
                meets = meets || no_right_descent(G, x, i0);
                inside = inside && G.in_parabolic(x, i0);
            }
            c.plus = meets && !inside;
            out.emplace(label_of(G, I, c.d), c);
        }
    }
    return out;
}

Verdict check_contraction_json(const json& j) {
    const auto G = [&] {
        try {
            return CoxGroup::build(cox::CoxType::parse(j.at("group").get<std::string>()));
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what());
        }
    }();
    const int n = G.rank();
    GenSet i0 = parse_gens(j.at("i0"), n);
    if (i0 == G.all()) throw FormatError("I0 must be a proper subset");
    Order order = parse_order(j.at("order"), n);
    Order order_conj = parse_order(j.at("order_conj"), n);
    const Elem wS = G.longest(G.all()), wI0 = G.longest(i0);
    std::vector<int> conj(n);
    for (int s = 0; s < n; ++s) conj[s] = G.gen_index(G.mul(G.mul(wS, G.gen(s)), wS));
    for (int i = 0; i < n; ++i)
        if (order_conj[i] != conj[order[i]]) return {false, "order_conj is not the w_S-conjugate of order"};

    auto all = enumerate_cosets(G, i0);
    const auto& basis = j.at("basis");
    Complex<Integer> X;
    X.lo = basis.at("lo").get<int>();
    std::map<std::string, std::pair<int, int>> where; // label -> (degree, position)
    std::size_t expected = 0;
    for (const auto& [lab, c] : all) expected += c.plus;
    int deg = X.lo;
    for (const auto& labels : basis.at("degrees")) {
        FreeModule M{labels.get<std::vector<std::string>>()};
        for (int k = 0; k < M.dim(); ++k) {
            const auto& lab = M.labels[k];
            auto it = all.find(lab);
            if (it == all.end()) return {false, "basis label '" + lab + "' is not a coset of W"};
            if (!it->second.plus) return {false, "basis element '" + lab + "' is not in A(I0)+"};
            if (it->second.I.size() != deg) return {false, "basis element '" + lab + "' sits in the wrong degree"};
            if (!where.emplace(lab, std::pair{deg, k}).second) return {false, "basis element '" + lab + "' repeated"};
        }
        X.modules.push_back(std::move(M));
        ++deg;
    }
    if (where.size() != expected) return {false, "basis does not cover A(I0)+"};

    // the differential, from the labels and the sign rule
    auto rank = order_rank(order, n);
    for (int k = X.lo; k < X.hi(); ++k) {
        MatrixBuilder<Integer> b(X.dim(k + 1), X.dim(k));
        for (int col = 0; col < X.dim(k); ++col) {
            const auto& a = all.at(X.module(k).labels[col]);
            for (int s = 0; s < n; ++s) {
                if (a.I.contains(s)) continue;
                GenSet J = a.I.with(s);
                auto target = label_of(G, J, min_in_coset(G, J, a.d));
                auto it = where.find(target);
                if (it == where.end()) return {false, "basis not closed under unions at '" + target + "'"};
                b.add(it->second.second, col, sign_count(a.I, s, rank) % 2 ? Integer(-1) : Integer(1));
            }
        }
        X.diffs.push_back(b.build());
    }
    if (X.dim(X.hi()) > 0)
        for (const auto& lab : X.module(X.hi()).labels)
            if (all.at(lab).I != G.all()) return {false, "basis not closed under unions at '" + lab + "'"};
    const auto& maps = j.at("maps");
    const auto& stored_d = maps.at("d");
    if (stored_d.size() != X.diffs.size()) return {false, "stored differential has the wrong number of degrees"};
    for (std::size_t k = 0; k < X.diffs.size(); ++k) {
        auto m = matrix_from_json<Integer>(stored_d[k], {});
        if (!(m == X.diffs[k])) {
            int d = X.lo + static_cast<int>(k);
            auto diff = m.rows() == X.diffs[k].rows() && m.cols() == X.diffs[k].cols() ? m - X.diffs[k] : X.diffs[k];
            return {false, detail::fail_at("stored differential differs from the rebuilt one", X, d, diff).describe()};
        }
    }

    // sigma from the m-coefficients
    GradedMap<Integer> sigma{-1, {}};
    std::map<int, MatrixBuilder<Integer>> blocks;
    std::set<std::pair<std::string, std::string>> pairs;
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& e : j.at("mcoeffs")) {
        if (!e.is_array() || e.size() != 3) throw FormatError("mcoeff must be [a, b, m]");
        auto a = e[0].get<std::string>(), b = e[1].get<std::string>();
        Integer m;
        scalar_from_json(e[2], {}, m);
        if (m == 0) throw FormatError("stored zero m-coefficient");
        auto ia = where.find(a), ib = where.find(b);
        if (ia == where.end() || ib == where.end()) return {false, "m-coefficient names a non-basis coset: " + a + " -> " + b};
        if (ib->second.first + 1 != ia->second.first) return {false, "m-coefficient not of degree -1: " + a + " -> " + b};
        if (!pairs.emplace(a, b).second) throw FormatError("duplicate m-coefficient " + a + " -> " + b);
        int da = ia->second.first;
        blocks.try_emplace(da, X.dim(da - 1), X.dim(da)).first->second.add(ib->second.second, ia->second.second, m);
        entries.emplace_back(a, b);
    }
    for (auto& [d, b] : blocks) sigma.blocks[d] = b.build();
    if (auto r = verify_contraction(X, sigma); !r) return {false, r.describe()};
    auto stored = graded_from_json<Integer>(maps.at("sigma"), {});
    if (auto r = block_shapes(stored, X, X, "sigma"); !r) return {false, r.describe()};
    for (int d = X.lo; d <= X.hi(); ++d) {
        auto diff = stored.at(d, X, X) - sigma.at(d, X, X);
        if (!diff.is_zero()) return {false, detail::fail_at("sigma disagrees with the m-coefficients", X, d, diff).describe()};
    }
    if (stored.shift != -1) return {false, "sigma must have degree -1"};

    // invariants of each nonzero m(a, b)
    auto v0 = [&](const CosetData& c) -> std::optional<Elem> {
        if (!no_right_descent(G, c.d, i0)) return std::nullopt;
        return c.d;
    };
    auto i0_set = [&](const CosetData& c, Elem v) {
        GenSet out;
        for (int t : i0.members())
            if (G.in_parabolic(G.mul(G.mul(v, G.gen(t)), G.inv(v)), c.I)) out = out.with(t);
        return out;
    };
    auto theta_v0 = [&](const CosetData& c, Elem v) {
        GenSet J;
        for (int s : c.I.members()) J = J.with(conj[s]);
        return min_in_coset(G, J, G.mul(G.mul(wS, v), wI0));
    };
    auto right_divides = [&](Elem x, Elem y) { return G.length(G.mul(y, G.inv(x))) + G.length(x) == G.length(y); };
    for (const auto& [a, b] : entries) {
        const auto& ca = all.at(a);
        const auto& cb = all.at(b);
        auto va = v0(ca), vb = v0(cb);
        if (!va) return {false, "no distinguished element in '" + a + "'"};
        if (!vb) return {false, "no distinguished element in '" + b + "'"};
        if (!i0_set(ca, *va).subset_of(i0_set(cb, *vb))) return {false, "I0-set shrinks along m-coefficient " + a + " -> " + b};
        if (!right_divides(theta_v0(cb, *vb), theta_v0(ca, *va)))
            return {false, "right-divisibility refinement fails along m-coefficient " + a + " -> " + b};
    }
    return {};
}

// Pointers to every perturbable scalar, in document order.
void collect_scalars(json& j, std::vector<json*>& out) {
    if (j.is_object()) {
        if (j.contains("entries") && j.contains("rows")) {
            for (auto& e : j["entries"]) out.push_back(&e);
            return;
        }
        for (auto& [key, v] : j.items()) collect_scalars(v, out);
    } else if (j.is_array()) {
        for (auto& v : j) collect_scalars(v, out);
    }
}

std::vector<json*> scalar_slots(json& j) {
    std::vector<json*> out;
    if (j.contains("maps")) collect_scalars(j["maps"], out);
    if (j.contains("mcoeffs"))
        for (auto& e : j["mcoeffs"]) out.push_back(&e);
    return out;
}

// Adds one to the scalar in the last position of an entry; true if it became zero.
bool bump(json& entry) {
    json& v = entry.back();
    if (v.is_string()) {
        auto s = v.get<std::string>();
        if (s.find('/') != std::string::npos) {
            Rational r = parse_rational(s) + 1;
            v = scalar_string(r);
            return r == 0;
        }
        Integer z = parse_integer(s) + 1;
        v = scalar_string(z);
        return z == 0;
    }
    std::int64_t c = v.contains("1") ? v["1"].get<std::int64_t>() + 1 : 1;
    if (c == 0) v.erase("1");
    else v["1"] = c;
    return v.empty();
}

} // namespace

json sigma_certificate(const cosets::CosetSystem& sys, const cosets::SigmaCert& c) {
    const auto& G = sys.group();
    const auto& X = c.plus.complex;
    json mco = json::array();
    for (const auto& [ab, m] : c.m)
        mco.push_back(json::array({cosets::coset_label(G, sys.at(ab.first)), cosets::coset_label(G, sys.at(ab.second)),
                                   scalar_to_json(m, {})}));
    return {{"kind", "contraction"},
            {"algebra", "coxeter"},
            {"group", G.type().name()},
            {"i0", gens_json(c.i0)},
            {"order", order_json(c.order)},
            {"order_conj", order_json(c.order_conj)},
            {"basis", basis_json(X)},
            {"maps", {{"d", diffs_json(X, {})}, {"sigma", graded_to_json(c.sigma, {})}}},
            {"mcoeffs", std::move(mco)}};
}

json equivalence_certificate(const EquivCert<Integer>& c, const EquivMeta& m) { return equivalence_json(c, m, "integer"); }
json equivalence_certificate(const EquivCert<Rational>& c, const EquivMeta& m) { return equivalence_json(c, m, "rational"); }
json equivalence_certificate(const EquivCert<Laurent>& c, const EquivMeta& m) { return equivalence_json(c, m, "laurent"); }

Verdict verify_certificate(const json& j) {
    try {
        if (!j.is_object()) throw FormatError("certificate must be a JSON object");
        auto kind = j.at("kind").get<std::string>();
        if (kind == "contraction") return check_contraction_json(j);
        if (kind != "equivalence") throw FormatError("unknown certificate kind '" + kind + "'");
        auto ring = j.at("ring").get<std::string>();
        auto names = j.at("names").get<Names>();
        if (ring == "integer") return check_equivalence_json<Integer>(j, names);
        if (ring == "rational") return check_equivalence_json<Rational>(j, names);
        if (ring == "laurent") return check_equivalence_json<Laurent>(j, names);
        throw FormatError("unknown ring '" + ring + "'");
    } catch (const FormatError& e) {
        return {false, std::string("malformed certificate: ") + e.what()};
    } catch (const json::exception& e) {
        return {false, std::string("malformed certificate: ") + e.what()};
    } catch (const std::exception& e) {
        return {false, std::string("certificate rejected: ") + e.what()};
    }
}

std::size_t perturbable_entries(const json& j) {
    json copy = j;
    return scalar_slots(copy).size();
}

json perturb_one(const json& j, std::size_t index) {
    json out = j;
    auto slots = scalar_slots(out);
    if (slots.empty()) throw std::invalid_argument("certificate has no stored scalars");
    json* e = slots[index % slots.size()];
    if (bump(*e)) {
        // a vanished entry is dropped, as the writer never stores zeros
        e->back() = nullptr;
        auto drop = [](json& arr) {
            json kept = json::array();
            for (auto& x : arr)
                if (!x.back().is_null()) kept.push_back(std::move(x));
            arr = std::move(kept);
        };
        std::vector<json*> parents;
        std::function<void(json&)> walk = [&](json& node) {
            if (node.is_object()) {
                if (node.contains("entries")) parents.push_back(&node["entries"]);
                for (auto& [k, v] : node.items()) walk(v);
            } else if (node.is_array()) {
                for (auto& v : node) walk(v);
            }
        };
        walk(out["maps"]);
        if (out.contains("mcoeffs")) parents.push_back(&out["mcoeffs"]);
        for (json* p : parents) drop(*p);
    }
    return out;
}

FuzzResult fuzz(const json& j, int trials, unsigned seed) {
    FuzzResult r;
    std::mt19937_64 rng(seed);
    std::size_t n = perturbable_entries(j);
    if (n == 0) return r;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int t = 0; t < trials; ++t) {
        std::size_t idx = pick(rng);
        auto v = verify_certificate(perturb_one(j, idx));
        ++r.trials;
        if (!v.ok) ++r.rejected;
        else if (r.first_survivor.empty()) r.first_survivor = "entry " + std::to_string(idx);
    }
    return r;
}

} // namespace hk::cert
