#include "homkit/cosets.hpp"
#include "homkit/equivalence.hpp"

#include <algorithm>
#include <stdexcept>

namespace hk::cosets {

Coset make_coset(const CoxGroup& G, GenSet I, Elem w) { return {I, G.coset_min_rep(I, w, cox::Side::right).d}; }

Coset coset_union(const CoxGroup& G, const Coset& a, GenSet J) { return make_coset(G, a.I | J, a.d); }

bool coset_contains(const CoxGroup& G, const Coset& a, const Coset& b) {
    return b.I.subset_of(a.I) && make_coset(G, a.I, b.d).d == a.d;
}

std::string coset_label(const CoxGroup& G, const Coset& a) { return a.I.to_string() + "|" + G.word_string(a.d); }

Coset parse_coset_label(const CoxGroup& G, std::string_view text) {
    auto bad = [&] { return std::invalid_argument("bad coset label '" + std::string(text) + "'"); };
    auto bar = text.find('|');
    if (bar == std::string_view::npos || text.size() < 3 || text.front() != '{' || text[bar - 1] != '}') throw bad();
    std::string_view set = text.substr(1, bar - 2);
    GenSet I;
    std::size_t pos = 0;
    while (pos < set.size()) {
        auto comma = set.find(',', pos);
        if (comma == std::string_view::npos) comma = set.size();
        std::string item(set.substr(pos, comma - pos));
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) throw bad();
        int s = std::stoi(item) - 1;
        if (s < 0 || s >= G.rank() || I.contains(s)) throw bad();
        I = I.with(s);
        pos = comma + 1;
    }
    Elem d = G.parse_word(text.substr(bar + 1));
    Coset a{I, d};
    if (make_coset(G, I, d) != a || I.to_string() != std::string(text.substr(0, bar)) ||
        G.word_string(d) != text.substr(bar + 1))
        throw bad();
    return a;
}

CosetSystem::CosetSystem(const CoxGroup& G, GenSet i0) : G_(&G), i0_(i0) {
    if (!i0.subset_of(G.all())) throw std::invalid_argument("I0 is not a subset of S");
    if (i0 == G.all()) throw std::invalid_argument("I0 = S is excluded");
    for (GenSet I : cox::subsets_of(G.all()))
        for (Elem d : G.dist_reps(I, i0)) cosets_.push_back({I, d});
    std::sort(cosets_.begin(), cosets_.end(), [](const Coset& a, const Coset& b) {
        if (a.I.size() != b.I.size()) return a.I.size() < b.I.size();
        if (a.I != b.I) return a.I < b.I;
        return a.d < b.d;
    });
    for (int k = 0; k < size(); ++k) {
        const auto& a = cosets_[k];
        index_[a] = k;
        bool p = !(a.I.subset_of(i0) && a.d == G.identity());
        plus_.push_back(p);
        if (p) plus_list_.push_back(k);
    }
    const Elem wS = G.longest(G.all());
    for (int s = 0; s < G.rank(); ++s) conj_.push_back(G.gen_index(G.mul(G.mul(wS, G.gen(s)), wS)));
}

int CosetSystem::index_of(const Coset& a) const {
    auto it = index_.find(a);
    return it == index_.end() ? -1 : it->second;
}

bool CosetSystem::in_a_i0(const Coset& a) const { return index_of(a) >= 0; }

bool CosetSystem::in_plus(const Coset& a) const {
    int k = index_of(a);
    return k >= 0 && plus_[k];
}

GenSet CosetSystem::i0_of(const Coset& a) const {
    const auto& G = *G_;
    GenSet out;
    for (int t : i0_.members())
        if (G.in_parabolic(G.mul(G.mul(a.d, G.gen(t)), G.inv(a.d)), a.I)) out = out.with(t);
    return out;
}

Elem CosetSystem::theta_elem(Elem w) const {
    const auto& G = *G_;
    return G.mul(G.mul(G.longest(G.all()), w), G.longest(i0_));
}

GenSet CosetSystem::conj(GenSet I) const {
    GenSet out;
    for (int s : I.members()) out = out.with(conj_[s]);
    return out;
}

Coset CosetSystem::theta(const Coset& a) const { return make_coset(*G_, conj(a.I), theta_elem(a.d)); }

int CosetSystem::s_choice(Elem w) const {
    const auto& G = *G_;
    for (int t : i0_.members())
        if (G.right_descent(w, t)) throw std::domain_error("s_choice: element not in D_{0,I0}");
    Elem tw = theta_elem(w);
    if (tw == G.identity()) throw std::domain_error("s_choice: w = w_S w_I0");
    int s = conj_[G.reduced_word(tw).front()];
    bool longer = G.length(G.lmul_gen(s, w)) > G.length(w);
    int back = G.gen_index(G.mul(G.mul(G.inv(w), G.gen(s)), w));
    if (!longer || (back >= 0 && i0_.contains(back))) throw std::logic_error("s_choice: postcondition fails");
    return s;
}

CosetComplex coset_span_complex(const CosetSystem& sys, const std::vector<int>& members, const Order& order) {
    const auto& G = sys.group();
    const auto rank = order_rank(order, G.rank());
    CosetComplex out;
    out.members = members;
    out.complex.lo = 0;
    out.complex.modules.resize(G.rank() + 1);
    for (int k : members) {
        const auto& a = sys.at(k);
        int deg = a.I.size();
        out.where[k] = {deg, out.complex.modules[deg].dim()};
        out.complex.modules[deg].labels.push_back(coset_label(G, a));
    }
    std::vector<MatrixBuilder<Integer>> diffs;
    for (int deg = 0; deg < G.rank(); ++deg)
        diffs.emplace_back(out.complex.modules[deg + 1].dim(), out.complex.modules[deg].dim());
    for (int k : members) {
        const auto& a = sys.at(k);
        auto [deg, col] = out.where[k];
        for (int s : (G.all() - a.I).members()) {
            int t = sys.index_of(coset_union(G, a, s));
            auto it = out.where.find(t);
            if (it == out.where.end()) throw std::invalid_argument("coset list not closed under unions");
            diffs[deg].add(it->second.second, col, sign_count(a.I, s, rank) % 2 ? Integer(-1) : Integer(1));
        }
    }
    for (auto& b : diffs) out.complex.diffs.push_back(b.build());
    return out;
}

Complex<Integer> coxeter_complex(const CoxGroup& G, const Order& order) {
    if (G.rank() == 0) throw std::invalid_argument("empty generating set");
    CosetSystem all(G, GenSet());
    std::vector<int> members(all.size());
    for (int k = 0; k < all.size(); ++k) members[k] = k;
    return coset_span_complex(all, members, order).complex;
}

Order conjugated_order(const CosetSystem& sys, const Order& order) {
    Order out;
    for (int s : order) out.push_back(sys.conj(s));
    return out;
}

namespace {

bool in_b(const CosetSystem& sys, int k) {
    const auto& G = sys.group();
    return sys.at(k).d != sys.theta_elem(G.identity());
}

// Differential on Z B (closed under unions) in the given order, as a square matrix on coset indices.
SparseMatrix<Integer> b_differential(const CosetSystem& sys, const Order& order) {
    const auto& G = sys.group();
    const auto rank = order_rank(order, G.rank());
    MatrixBuilder<Integer> d(sys.size(), sys.size());
    for (int k = 0; k < sys.size(); ++k) {
        if (!in_b(sys, k)) continue;
        const auto& b = sys.at(k);
        for (int s : (G.all() - b.I).members()) {
            int t = sys.index_of(coset_union(G, b, s));
            d.add(t, k, sign_count(b.I, s, rank) % 2 ? Integer(-1) : Integer(1));
        }
    }
    return d.build();
}

SparseMatrix<Integer> tau_matrix(const CosetSystem& sys, const Order& order_conj) {
    MatrixBuilder<Integer> t(sys.size(), sys.size());
    for (int k = 0; k < sys.size(); ++k) {
        if (!in_b(sys, k)) continue;
        auto v = tau(sys, order_conj, k);
        if (v.sign != 0) t.add(v.target, k, Integer(v.sign));
    }
    return t.build();
}

SparseMatrix<Integer> b_identity(const CosetSystem& sys) {
    MatrixBuilder<Integer> id(sys.size(), sys.size());
    for (int k = 0; k < sys.size(); ++k)
        if (in_b(sys, k)) id.add(k, k, Integer(1));
    return id.build();
}

} // namespace

TauValue tau(const CosetSystem& sys, const Order& order_conj, int k) {
    const auto& G = sys.group();
    if (!in_b(sys, k)) throw std::domain_error("tau: coset not in the theta image of A(I0)+");
    const auto& b = sys.at(k);
    int s = sys.s_choice(b.d);
    if (!b.I.contains(s)) return {};
    const auto rank = order_rank(order_conj, G.rank());
    int target = sys.index_of({b.I.without(s), b.d});
    return {sign_count(b.I, s, rank) % 2 ? -1 : 1, target};
}

InvariantReport check_tau(const CosetSystem& sys, const Order& order) {
    const auto& G = sys.group();
    InvariantReport rep;
    const Order oc = conjugated_order(sys, order);
    // B is exactly the theta image of A(I0)+
    for (int k = 0; k < sys.size(); ++k) {
        int img = sys.index_of(sys.theta(sys.at(k)));
        if (img < 0 || sys.index_of(sys.theta(sys.at(img))) != k) rep.fail("theta is not an involution on A(I0)");
        else if (sys.plus(k) != in_b(sys, img)) rep.fail("theta(A(I0)+) differs from B");
    }
    auto T = tau_matrix(sys, oc);
    auto D = b_differential(sys, oc);
    if (!(T * T).is_zero()) rep.fail("tau^2 != 0");
    for (int k = 0; k < sys.size(); ++k) {
        if (!in_b(sys, k)) continue;
        const auto& b = sys.at(k);
        auto v = tau(sys, oc, k);
        if (v.sign == 0) continue;
        const auto& t = sys.at(v.target);
        if (!in_b(sys, v.target)) rep.fail("tau leaves B at " + coset_label(G, b));
        if (G.length(t.d) != G.length(b.d)) rep.fail("tau changes length at " + coset_label(G, b));
        if (sys.i0_of(t) != sys.i0_of(b)) rep.fail("tau changes the I0-set at " + coset_label(G, b));
    }
    auto rho = T * D + D * T - b_identity(sys);
    for (int k = 0; k < sys.size(); ++k) {
        if (!in_b(sys, k)) continue;
        const auto& b = sys.at(k);
        for (const auto& [j, c] : rho.col(k)) {
            const auto& bp = sys.at(j);
            if (bp.d == b.d || !G.right_divides(bp.d, b.d))
                rep.fail("rho not strictly right-divisibility decreasing at " + coset_label(G, b));
            if (!sys.i0_of(b).subset_of(sys.i0_of(bp))) rep.fail("rho shrinks the I0-set at " + coset_label(G, b));
        }
    }
    return rep;
}

InvariantReport check_sigma(const CosetSystem& sys, const SigmaCert& cert) {
    const auto& G = sys.group();
    InvariantReport rep;
    if (auto c = verify_contraction(cert.plus.complex, cert.sigma); !c) rep.fail(c.describe());
    for (const auto& [ab, m] : cert.m) {
        const auto& a = sys.at(ab.first);
        const auto& b = sys.at(ab.second);
        std::string where = coset_label(G, a) + " -> " + coset_label(G, b);
        if (!sys.plus(ab.first) || !sys.plus(ab.second)) rep.fail("m-entry outside A(I0)+: " + where);
        if (b.I.size() + 1 != a.I.size()) rep.fail("m-entry not of degree -1: " + where);
        if (!sys.i0_of(a).subset_of(sys.i0_of(b))) rep.fail("I0-monotonicity fails: " + where);
        // the right-divisibility order of the tau side, pulled back along theta
        if (!G.right_divides(sys.v0(sys.theta(b)), sys.v0(sys.theta(a))))
            rep.fail("right-divisibility refinement fails: " + where);
    }
    return rep;
}

SigmaCert build_sigma(const CosetSystem& sys, const Order& order) {
    const auto& G = sys.group();
    SigmaCert cert;
    cert.i0 = sys.i0();
    cert.order = order;
    cert.order_conj = conjugated_order(sys, order);
    auto T = tau_matrix(sys, cert.order_conj);
    auto D = b_differential(sys, cert.order_conj);
    auto minus_rho = b_identity(sys) - (T * D + D * T);
    SparseMatrix<Integer> term = T, acc = T;
    const int cap = 4 * G.length(G.longest(G.all()));
    for (;;) {
        term = term * minus_rho;
        if (term.is_zero()) break;
        acc = acc + term;
        if (++cert.iterations > cap) throw std::logic_error("Neumann series did not terminate");
    }
    for (int a : sys.plus_indices()) {
        int b = sys.index_of(sys.theta(sys.at(a)));
        for (const auto& [bp, c] : acc.col(b)) {
            int ap = sys.index_of(sys.theta(sys.at(bp)));
            cert.m[{a, ap}] = c;
        }
    }
    cert.plus = coset_span_complex(sys, sys.plus_indices(), order);
    std::map<int, MatrixBuilder<Integer>> blocks;
    const auto& X = cert.plus.complex;
    for (int deg = 1; deg <= X.hi(); ++deg) blocks.emplace(deg, MatrixBuilder<Integer>(X.dim(deg - 1), X.dim(deg)));
    for (const auto& [ab, c] : cert.m) {
        auto [da, ca] = cert.plus.where.at(ab.first);
        auto [db, cb] = cert.plus.where.at(ab.second);
        if (db != da - 1) throw std::logic_error("sigma is not of degree -1");
        blocks.at(da).add(cb, ca, c);
    }
    for (auto& [deg, b] : blocks) {
        auto m = b.build();
        if (!m.is_zero()) cert.sigma.blocks[deg] = std::move(m);
    }
    auto rep = check_sigma(sys, cert);
    if (!rep.ok) throw VerificationError(Check::fail("sigma certificate: " + rep.failures.front()));
    return cert;
}

} // namespace hk::cosets
