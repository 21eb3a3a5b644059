#include "homkit/group_pipelines.hpp"

#include "homkit/blocks.hpp"
#include "homkit/linalg.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace hk::bn {

namespace {

using cosets::CosetSystem;

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

GroupAlg elem(int g) { return ga_basis(g); }

template <class R> GradedMap<R> build_graded(std::map<int, MatrixBuilder<R>>& bld, int shift = 0) {
    GradedMap<R> out{shift, {}};
    for (auto& [deg, b] : bld) {
        auto m = b.build();
        if (!m.is_zero()) out.blocks[deg] = std::move(m);
    }
    return out;
}

template <class R> std::map<int, MatrixBuilder<R>> builders(const Complex<R>& src, const Complex<R>& dst) {
    std::map<int, MatrixBuilder<R>> bld;
    for (int deg = src.lo; deg <= src.hi(); ++deg) bld.emplace(deg, MatrixBuilder<R>(dst.dim(deg), src.dim(deg)));
    return bld;
}

template <class R>
Check commutes(const GradedMap<R>& f, const GradedMap<R>& a_src, const GradedMap<R>& a_dst, const Complex<R>& src,
               const Complex<R>& dst) {
    for (int deg = src.lo; deg <= src.hi(); ++deg) {
        auto diff = f.at(deg, src, dst) * a_src.at(deg, src, src) - a_dst.at(deg, dst, dst) * f.at(deg, src, dst);
        if (!diff.is_zero()) return detail::fail_at("map does not commute with the action", src, deg, diff);
    }
    return Check::pass();
}

SparseVec<Rational> scaled(SparseVec<Rational> v, const Rational& c) {
    for (auto& [i, a] : v) a *= c;
    return v;
}

SparseVec<Rational> shifted(const SparseVec<Rational>& v, int by) {
    SparseVec<Rational> out = v;
    for (auto& [i, a] : out) i += by;
    return out;
}

std::vector<int> all_elements(const FinGroup& G) {
    std::vector<int> v(G.size());
    std::iota(v.begin(), v.end(), 0);
    return v;
}

Rational trace(const SparseMatrix<Rational>& m) {
    Rational t = 0;
    for (int j = 0; j < m.cols(); ++j)
        for (const auto& [i, a] : m.col(j))
            if (i == j) t += a;
    return t;
}

} // namespace

// ---------------------------------------------------------------- TModel

TModel::TModel(const BNPair& bn, GenSet K, std::vector<int> omega) : bn_(&bn), K_(K), omega_(std::move(omega)) {
    const auto& G = bn.group();
    std::sort(omega_.begin(), omega_.end());
    const auto& pk = bn.parabolic(K);
    if (!is_subset(pk.P, omega_)) throw std::invalid_argument("Omega must contain P_K");
    left_ = coset_index(G, pk.U, false);
    right_id_.assign(G.size(), -1);
    for (int w : omega_) {
        if (right_id_[w] >= 0) continue;
        int k = static_cast<int>(right_reps_.size());
        right_reps_.push_back(w);
        for (int u : pk.U) right_id_[G.mul(u, w)] = k;
    }
    const int nl = left_.count(), nr = static_cast<int>(right_reps_.size());
    pk_gens_ = bn.generators(pk.P);
    UnionFind uf(nl * nr);
    for (int p : pk_gens_)
        for (int c = 0; c < nl; ++c)
            for (int c2 = 0; c2 < nr; ++c2)
                uf.unite(left_.id[G.mul(left_.reps[c], p)] * nr + c2, c * nr + right_id_[G.mul(p, right_reps_[c2])]);
    orbit_.assign(nl * nr, -1);
    std::vector<int> of_root(nl * nr, -1);
    for (int x = 0; x < nl * nr; ++x) {
        int r = uf.find(x);
        if (of_root[r] < 0) {
            of_root[r] = static_cast<int>(orbit_rep_.size());
            orbit_rep_.emplace_back(left_.reps[x / nr], right_reps_[x % nr]);
        }
        orbit_[x] = of_root[r];
    }
}

int TModel::basis_of(int g, int w) const {
    int r = right_id_.at(w);
    if (r < 0) throw std::invalid_argument("right factor outside Omega");
    return orbit_[left_.id[g] * static_cast<int>(right_reps_.size()) + r];
}

FreeModule TModel::module() const {
    FreeModule m;
    for (const auto& [g, w] : orbit_rep_) m.labels.push_back(std::to_string(g) + "|" + std::to_string(w));
    return m;
}

SparseVec<Rational> TModel::coords(const GroupAlg& x, const GroupAlg& y) const {
    std::map<int, Rational> X, Y;
    for (const auto& [h, c] : x) X[left_.id[h]] += c;
    for (const auto& [h, c] : y) {
        int r = right_id_.at(h);
        if (r < 0) throw std::invalid_argument("right factor outside Omega");
        Y[r] += c;
    }
    const int nr = static_cast<int>(right_reps_.size());
    Accumulator<Rational> acc(dim());
    for (const auto& [c, a] : X) {
        if (is_zero(a)) continue;
        for (const auto& [c2, b] : Y)
            if (!is_zero(b)) acc.add(orbit_[c * nr + c2], a * b);
    }
    return acc.take();
}

SparseMatrix<Rational> TModel::left_action(int g) const {
    const auto& G = bn_->group();
    SparseMatrix<Rational> m(dim(), dim());
    for (int b = 0; b < dim(); ++b) m.set_col(b, {{basis_of(G.mul(g, orbit_rep_[b].first), orbit_rep_[b].second), Rational(1)}});
    return m;
}

SparseMatrix<Rational> TModel::right_action(int h) const {
    const auto& G = bn_->group();
    SparseMatrix<Rational> m(dim(), dim());
    for (int b = 0; b < dim(); ++b) m.set_col(b, {{basis_of(orbit_rep_[b].first, G.mul(orbit_rep_[b].second, h)), Rational(1)}});
    return m;
}

bool TModel::within_guard() const {
    long n = left_.count();
    return n * n <= 2500;
}

int TModel::quotient_dim() const {
    const auto& G = bn_->group();
    const int nl = left_.count(), nr = static_cast<int>(right_reps_.size());
    if (!within_guard()) throw std::invalid_argument("balancing quotient exceeds the size guard");
    std::vector<SparseVec<Rational>> rels;
    for (int p : pk_gens_)
        for (int c = 0; c < nl; ++c)
            for (int c2 = 0; c2 < nr; ++c2) {
                int a = left_.id[G.mul(left_.reps[c], p)] * nr + c2;
                int b = c * nr + right_id_[G.mul(p, right_reps_[c2])];
                if (a == b) continue;
                SparseVec<Rational> v{{std::min(a, b), Rational(1)}, {std::max(a, b), Rational(-1)}};
                rels.push_back(std::move(v));
            }
    return static_cast<int>(quotient_by(nl * nr, rels).free.size());
}

// ---------------------------------------------------------------- X(G)

XGModel build_XG(const BNPair& bn, const Order& order) {
    const auto& G = bn.group();
    const auto& W = bn.weyl();
    if (G.size() > 1000) throw std::invalid_argument(bn.name() + " is too large");
    XGModel M;
    const auto all = all_elements(G);
    std::map<std::uint32_t, FreeModule> mods;
    std::map<std::uint32_t, GroupAlg> e;
    for (GenSet I : cox::subsets_of(W.all())) {
        auto it = M.spaces.emplace(I.bits(), TModel(bn, I, all)).first;
        mods[I.bits()] = it->second.module();
        e[I.bits()] = bn.idempotent(I);
    }
    M.system = make_coeff_system<Rational>(W.all(), mods, [&](GenSet J, GenSet I) {
        const auto& TI = M.spaces.at(I.bits());
        const auto& TJ = M.spaces.at(J.bits());
        const auto& eI = e.at(I.bits());
        SparseMatrix<Rational> m(TJ.dim(), TI.dim());
        for (int b = 0; b < TI.dim(); ++b) {
            auto [g, w] = TI.rep(b);
            m.set_col(b, TJ.coords(ga_mul(G, elem(g), eI), ga_mul(G, eI, elem(w))));
        }
        return m;
    });
    auto as = assemble(M.system, order);
    M.X.X = std::move(as.complex);
    M.block = std::move(as.block);
    M.gens = bn.generators(all);
    for (int g : M.gens) {
        M.X.left.push_back(xg_action(M, g, cox::Side::left));
        M.X.right.push_back(xg_action(M, g, cox::Side::right));
    }
    return M;
}

GradedMap<Rational> xg_action(const XGModel& M, int g, cox::Side side) {
    auto bld = builders(M.X.X, M.X.X);
    for (const auto& [bits, T] : M.spaces) {
        auto [deg, off] = M.block.at(bits);
        bld.at(deg).add_block(side == cox::Side::left ? T.left_action(g) : T.right_action(g), off, off);
    }
    return build_graded(bld);
}

Report xg_checks(const XGModel& M) {
    Report r;
    for (const auto& [bits, T] : M.spaces) {
        if (!T.within_guard()) continue;
        r.add("orbit basis of X(G)^" + GenSet(bits).to_string() + " matches the balancing quotient",
              T.quotient_dim() == T.dim(), std::to_string(T.dim()));
    }
    r.add("X(G) is a complex", verify_complex(M.X.X));
    r.merge(check_actions(M.X), "X(G) ");
    return r;
}

// ---------------------------------------------------------------- X(G) e_I0

Thm9Result theorem9_certificate(const BNPair& bn, GenSet i0, const Order& order) {
    const auto& G = bn.group();
    const auto& W = bn.weyl();
    if (!i0.subset_of(W.all()) || i0 == W.all()) throw std::invalid_argument("I0 must be a proper subset of S");
    Thm9Result res;
    auto& rep = res.report;
    CosetSystem sys(W, i0);
    auto sc = cosets::build_sigma(sys, order);
    const auto& P0 = bn.parabolic(i0).P;
    const auto& L0 = bn.parabolic(i0).L;
    std::map<std::uint32_t, GroupAlg> e;
    for (GenSet I : cox::subsets_of(W.all())) e[I.bits()] = bn.idempotent(I);
    const GroupAlg& e0 = e.at(i0.bits());

    // Y_b = Q G e_K (x)_{P_K} e_K Q P_I0 with K = I0(b)
    std::map<std::uint32_t, TModel> ys;
    std::map<std::uint32_t, FreeModule> mods;
    for (GenSet K : cox::subsets_of(i0)) {
        auto it = ys.emplace(K.bits(), TModel(bn, K, P0)).first;
        mods[K.bits()] = it->second.module();
    }
    auto M = make_coeff_system<Rational>(i0, mods, [&](GenSet J, GenSet I) {
        const auto& TI = ys.at(I.bits());
        const auto& TJ = ys.at(J.bits());
        const auto& eI = e.at(I.bits());
        SparseMatrix<Rational> m(TJ.dim(), TI.dim());
        for (int b = 0; b < TI.dim(); ++b) {
            auto [g, w] = TI.rep(b);
            m.set_col(b, TJ.coords(ga_mul(G, elem(g), eI), ga_mul(G, eI, elem(w))));
        }
        return m;
    });
    {
        // dim Q G e_I0 (x)_{L_I0} X(L_I0)^K = |G/P_I0| (|L_I0|/|U_K cap L_I0|)^2 / |L_K|
        bool ok = true;
        for (GenSet K : cox::subsets_of(i0)) {
            long uk = static_cast<long>(intersect(bn.parabolic(K).U, L0).size());
            long lk = static_cast<long>(bn.parabolic(K).L.size());
            long l = static_cast<long>(L0.size());
            long expect = (G.size() / static_cast<long>(P0.size())) * (l / uk) * (l / uk) / lk;
            if (expect != ys.at(K.bits()).dim()) ok = false;
        }
        rep.add("dim Y'_K = dim Q G e_I0 (x)_L X(L_I0)^K", ok);
    }
    auto data = cosets::system_blocks(sys, M);
    auto split = cosets::split_blocks(sys, sc, data);
    const auto& Y = split.Y.complex;
    const auto& Yp = split.Yp.complex;
    rep.add("Y is a complex", verify_complex(Y));
    {
        auto ind = assemble(M, order).complex;
        bool same = ind.modules.size() == Yp.modules.size();
        for (int deg = Yp.lo; same && deg <= Yp.hi(); ++deg) same = ind.dim(deg) == Yp.dim(deg) && ind.d(deg) == Yp.d(deg);
        rep.add("Y' is Q G e_I0 (x)_L X(L_I0)", same);
    }

    auto XM = build_XG(bn, order);
    const auto& X = XM.X.X;
    const auto rank = order_rank(order, W.rank());

    // X(G)^I e_I0 as the span of (g e_I (x) e_I w) e_I0
    std::map<std::uint32_t, Subspace> sub;
    std::map<std::uint32_t, std::pair<int, int>> xe_block;
    Complex<Rational> Xe;
    Xe.modules.resize(X.modules.size());
    std::vector<int> fill(X.modules.size(), 0);
    for (GenSet I : cox::subsets_of(W.all())) {
        const auto& T = XM.spaces.at(I.bits());
        const auto& eI = e.at(I.bits());
        std::vector<SparseVec<Rational>> span;
        for (int b = 0; b < T.dim(); ++b) {
            auto [g, w] = T.rep(b);
            span.push_back(T.coords(ga_mul(G, elem(g), eI), ga_mul(G, ga_mul(G, eI, elem(w)), e0)));
        }
        const auto& S = sub.emplace(I.bits(), Subspace(T.dim(), span)).first->second;
        int deg = I.size();
        xe_block[I.bits()] = {deg, fill[deg]};
        auto labels = T.module().labels;
        for (int i = 0; i < S.dim(); ++i) Xe.modules[deg].labels.push_back(I.to_string() + ":" + labels[S.pivots()[i]] + "e");
        fill[deg] += S.dim();
    }
    {
        std::vector<MatrixBuilder<Rational>> bld;
        for (std::size_t deg = 0; deg + 1 < Xe.modules.size(); ++deg) bld.emplace_back(fill[deg + 1], fill[deg]);
        bool stable = true;
        for (GenSet I : cox::subsets_of(W.all())) {
            const auto& S = sub.at(I.bits());
            auto [deg, off] = xe_block.at(I.bits());
            for (int s = 0; s < W.rank(); ++s) {
                if (I.contains(s)) continue;
                GenSet J = I | GenSet::single(s);
                Rational sign = sign_count(I, s, rank) % 2 == 0 ? 1 : -1;
                const auto& r = XM.system.restriction(J, I);
                for (int i = 0; i < S.dim(); ++i) {
                    auto c = sub.at(J.bits()).coords(r.apply(S.basis()[i]));
                    if (!c) {
                        stable = false;
                        continue;
                    }
                    bld[deg].add_col(off + i, scaled(*c, sign), xe_block.at(J.bits()).second);
                }
            }
        }
        rep.add("X(G) e_I0 is a subcomplex", stable);
        if (!stable) throw VerificationError(Check::fail(rep.first_failure()));
        for (auto& b : bld) Xe.diffs.push_back(b.build());
    }
    rep.add("X(G) e_I0 is a complex", verify_complex(Xe));

    // action of g on X(G) e_I0 (h right, in P_I0)
    auto xe_action = [&](int g, cox::Side side) {
        auto bld = builders(Xe, Xe);
        for (GenSet I : cox::subsets_of(W.all())) {
            const auto& T = XM.spaces.at(I.bits());
            const auto& S = sub.at(I.bits());
            auto act = side == cox::Side::left ? T.left_action(g) : T.right_action(g);
            auto [deg, off] = xe_block.at(I.bits());
            for (int i = 0; i < S.dim(); ++i) {
                auto c = S.coords(act.apply(S.basis()[i]));
                if (!c) throw VerificationError(Check::fail("action leaves X(G) e_I0", deg, off + i));
                bld.at(deg).add_col(off + i, *c, off);
            }
        }
        return build_graded(bld);
    };
    auto y_action = [&](const cosets::BlockComplex<Rational>& B, int g, cox::Side side) {
        auto bld = builders(B.complex, B.complex);
        for (int b : B.members) {
            const auto& T = ys.at(sys.i0_of(sys.at(b)).bits());
            auto [deg, off] = B.where.at(b);
            bld.at(deg).add_block(side == cox::Side::left ? T.left_action(g) : T.right_action(g), off, off);
        }
        return build_graded(bld);
    };

    // Phi: X(G)^I e_I0 -> sum of Y_{I,w}
    auto phi_b = builders(Xe, Y);
    bool well_defined = true, independent = true, rep_free = true;
    for (GenSet I : cox::subsets_of(W.all())) {
        const auto& T = XM.spaces.at(I.bits());
        const auto& S = sub.at(I.bits());
        const auto& PI = bn.parabolic(I).P;
        const auto& eI = e.at(I.bits());
        // omega = p w. p0 with p in P_I, p0 in P_I0: first and last factorizations
        std::vector<std::array<int, 3>> first(G.size(), {-1, -1, -1}), last(G.size(), {-1, -1, -1});
        for (Elem w : W.dist_reps(I, i0))
            for (int p : PI)
                for (int p0 : P0) {
                    int om = G.mul(G.mul(p, bn.rep(w)), p0);
                    if (first[om][0] < 0) first[om] = {w, p, p0};
                    last[om] = {w, p, p0};
                }
        auto image = [&](int g, const std::array<int, 3>& f, int t) {
            auto [w, p, p0] = f;
            int b = sys.index_of(cosets::make_coset(W, I, w));
            if (b < 0 || sys.at(b).d != w) throw std::logic_error("double coset is not a block");
            GenSet K = sys.i0_of(sys.at(b));
            if (K != (W.conjugate_into(I, w) & i0)) throw std::logic_error("I0-set of a block disagrees with I^w");
            GenSet IwI0 = I & W.conjugate_into(i0, W.inv(w));
            const auto& eK = e.at(K.bits());
            int wdot = G.mul(bn.rep(w), t);
            auto x = ga_mul(G, ga_mul(G, elem(G.mul(g, p)), eI), e.at(IwI0.bits()));
            auto left = ga_mul(G, ga_mul(G, x, elem(wdot)), eK);
            auto right = ga_mul(G, ga_mul(G, eK, elem(G.mul(G.inv(t), p0))), e0);
            return shifted(ys.at(K.bits()).coords(left, right), split.Y.where.at(b).second);
        };
        std::vector<SparseVec<Rational>> F(T.dim()), stacked;
        for (int j = 0; j < T.dim(); ++j) {
            auto [g, om] = T.rep(j);
            if (first[om][0] < 0) throw std::logic_error("element outside every double coset P_I w P_I0");
            F[j] = image(g, first[om], G.identity());
            if (image(g, last[om], G.identity()) != F[j]) rep_free = false;
            for (int t : bn.T())
                if (image(g, first[om], t) != F[j]) rep_free = false;
        }
        {
            std::vector<SparseVec<Rational>> span;
            for (int j = 0; j < T.dim(); ++j) {
                auto [g, w] = T.rep(j);
                auto s = T.coords(ga_mul(G, elem(g), eI), ga_mul(G, ga_mul(G, eI, elem(w)), e0));
                auto f = shifted(F[j], T.dim());
                s.insert(s.end(), f.begin(), f.end());
                span.push_back(std::move(s));
            }
            if (Subspace(T.dim() + Y.dim(I.size()), span).dim() != S.dim()) well_defined = false;
        }
        auto [deg, off] = xe_block.at(I.bits());
        for (int i = 0; i < S.dim(); ++i) {
            Accumulator<Rational> acc(Y.dim(deg));
            for (const auto& [j, c] : S.combo(i))
                for (const auto& [k, a] : F[j]) acc.add(k, c * a);
            phi_b.at(deg).add_col(off + i, acc.take());
        }
        // R G e_{I cap wI0} w. e_K = R G e_K inside Q G
        for (Elem w : W.dist_reps(I, i0)) {
            GenSet K = W.conjugate_into(I, w) & i0;
            GenSet IwI0 = I & W.conjugate_into(i0, W.inv(w));
            const auto& eK = e.at(K.bits());
            auto a = ga_mul(G, ga_mul(G, e.at(IwI0.bits()), elem(bn.rep(w))), eK);
            std::vector<SparseVec<Rational>> ga, gk;
            for (int h = 0; h < G.size(); ++h) {
                ga.push_back(ga_mul(G, elem(h), a));
                gk.push_back(ga_mul(G, elem(h), eK));
            }
            Subspace A(G.size(), ga), B(G.size(), gk);
            if (!(A.dim() == B.dim() && A.contains(eK) && B.contains(a))) independent = false;
        }
    }
    auto Phi = build_graded(phi_b);
    rep.add("Phi_w kills the relations among spanning vectors", well_defined);
    rep.add("Phi_w does not depend on the representative of w or the factorization", rep_free);
    rep.add("R G e_{I cap wI0} w e_K = R G e_K", independent);
    bool square = true;
    GradedMap<Rational> Psi{0, {}};
    for (int deg = Xe.lo; deg <= Xe.hi(); ++deg) {
        if (Xe.dim(deg) != Y.dim(deg)) {
            square = false;
            continue;
        }
        auto inv = inverse(Phi.at(deg, Xe, Y));
        if (!inv) {
            square = false;
            continue;
        }
        Psi.blocks[deg] = std::move(*inv);
    }
    rep.add("Phi_w maps are bijective", square);
    rep.add("block squares commute (Phi is a chain map)", verify_chain_map(Phi, Xe, Y));
    if (!rep.ok()) throw VerificationError(Check::fail(rep.first_failure()));

    const auto p0_gens = bn.generators(P0);
    for (int g : XM.gens) rep.add("Phi commutes with left " + G.to_string(g), commutes(Phi, xe_action(g, cox::Side::left), y_action(split.Y, g, cox::Side::left), Xe, Y));
    for (int h : p0_gens) rep.add("Phi commutes with right " + G.to_string(h), commutes(Phi, xe_action(h, cox::Side::right), y_action(split.Y, h, cox::Side::right), Xe, Y));

    rep.add("kernel contraction", verify_contraction(split.kernel.Z, split.kernel.sigma));
    auto eq = split_equivalence(Y, Yp, split.p, split.s, split.kernel);
    auto& c = res.cert;
    c.Y = Xe;
    c.Yp = Yp;
    c.p = compose(eq.p, Phi, Xe, Y, Yp);
    c.g = compose(Psi, eq.g, Yp, Y, Xe);
    c.k = compose(Psi, compose(eq.k, Phi, Xe, Y, Y), Xe, Y, Xe);
    rep.add("equivalence identities on X(G) e_I0", verify_equivalence(c));
    for (int g : XM.gens) {
        auto LX = xe_action(g, cox::Side::left);
        auto LY = y_action(split.Yp, g, cox::Side::left);
        rep.add("p commutes with left " + G.to_string(g), commutes(c.p, LX, LY, Xe, Yp));
        rep.add("g commutes with left " + G.to_string(g), commutes(c.g, LY, LX, Yp, Xe));
    }
    for (int h : bn.generators(L0)) {
        auto RX = xe_action(h, cox::Side::right);
        auto RY = y_action(split.Yp, h, cox::Side::right);
        rep.add("p commutes with right " + G.to_string(h), commutes(c.p, RX, RY, Xe, Yp));
        rep.add("g commutes with right " + G.to_string(h), commutes(c.g, RY, RX, Yp, Xe));
    }
    return res;
}

// ---------------------------------------------------------------- Steinberg restriction

Thm20Result theorem20_certificate(const BNPair& bn, GenSet i0, const Order& order) {
    const auto& G = bn.group();
    const auto& W = bn.weyl();
    if (!i0.subset_of(W.all()) || i0 == W.all()) throw std::invalid_argument("I0 must be a proper subset of S");
    Thm20Result res;
    auto& rep = res.report;
    CosetSystem sys(W, i0);
    auto sc = cosets::build_sigma(sys, order);
    const auto& P0 = bn.parabolic(i0).P;
    const auto& L0 = bn.parabolic(i0).L;
    auto st = st_model(bn, true, order);
    const auto& St = st.assembled.complex;

    {
        bool part = true;
        for (GenSet I : cox::subsets_of(W.all())) {
            std::vector<int> hit(G.size(), 0);
            for (Elem w : W.dist_reps(I, i0))
                for (int x : product_set(G, product_set(G, bn.parabolic(I).Pm, {bn.rep(w)}), P0)) ++hit[x];
            part = part && std::all_of(hit.begin(), hit.end(), [](int k) { return k == 1; });
        }
        rep.add("G is the disjoint union of the P_I^- w P_I0, w in D_{I,I0}", part);
    }

    // cosets P_I^- x in the block b = W_I w, i.e. inside P_I^- w. P_I0
    std::vector<std::vector<int>> members(sys.size());
    std::map<std::uint32_t, std::vector<std::pair<int, int>>> place; // I -> coset id -> (block, position)
    for (GenSet I : cox::subsets_of(W.all())) place[I.bits()].assign(st.cosets.at(I.bits()).count(), {-1, -1});
    for (int b = 0; b < sys.size(); ++b) {
        const auto& a = sys.at(b);
        const auto& ids = st.cosets.at(a.I.bits()).id;
        std::set<int> ks;
        for (int g : P0) ks.insert(ids[G.mul(bn.rep(a.d), g)]);
        members[b].assign(ks.begin(), ks.end());
        for (std::size_t j = 0; j < members[b].size(); ++j) {
            auto& slot = place.at(a.I.bits())[members[b][j]];
            if (slot.first >= 0) throw std::logic_error("coset lies in two blocks");
            slot = {b, static_cast<int>(j)};
        }
    }
    std::vector<std::string> transport_failures;
    std::map<std::pair<int, int>, SparseMatrix<Integer>> cache;
    cosets::BlockData<Integer> data;
    data.module = [&](int b) {
        FreeModule m;
        const auto& reps = st.cosets.at(sys.at(b).I.bits()).reps;
        for (int k : members[b]) m.labels.push_back("P-" + std::to_string(reps[k]));
        return m;
    };
    // [P_I^-] w. g -> [P_I'^-] w'. g for g in P_I0
    data.transport = [&](int b, int b2) {
        auto key = std::make_pair(b, b2);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
        const auto& a = sys.at(b);
        const auto& a2 = sys.at(b2);
        const auto& ids = st.cosets.at(a.I.bits()).id;
        const auto& ids2 = st.cosets.at(a2.I.bits()).id;
        std::vector<int> img(members[b].size(), -1);
        bool ok = true;
        for (int g : P0) {
            int j = place.at(a.I.bits())[ids[G.mul(bn.rep(a.d), g)]].second;
            auto [bb, j2] = place.at(a2.I.bits())[ids2[G.mul(bn.rep(a2.d), g)]];
            if (bb != b2) ok = false;
            if (img[j] >= 0 && img[j] != j2) ok = false;
            img[j] = j2;
        }
        if (!ok) transport_failures.push_back(cosets::coset_label(W, a) + " -> " + cosets::coset_label(W, a2));
        SparseMatrix<Integer> m(static_cast<int>(members[b2].size()), static_cast<int>(members[b].size()));
        for (std::size_t j = 0; j < img.size(); ++j)
            if (img[j] >= 0) m.set_col(static_cast<int>(j), {{img[j], Integer(1)}});
        cache.emplace(key, m);
        return m;
    };

    {
        std::vector<std::string> bad;
        for (const auto& [bb, m] : sc.m) {
            if (m == 0) continue;
            const auto& a = sys.at(bb.first);
            const auto& a2 = sys.at(bb.second);
            auto lhs = intersect(conjugate(G, bn.parabolic(a.I).Pm, bn.rep(a.d)), P0);
            auto rhs = intersect(conjugate(G, bn.parabolic(a2.I).Pm, bn.rep(a2.d)), P0);
            if (!is_subset(lhs, rhs)) bad.push_back("(" + cosets::coset_label(W, a) + ", " + cosets::coset_label(W, a2) + ")");
        }
        std::string detail;
        for (const auto& s : bad) detail += (detail.empty() ? "" : " ") + s;
        rep.add("(P_I^-)^w cap P_I0 inside (P_I'^-)^w' cap P_I0 for every nonzero m", bad.empty(), detail);
    }

    auto split = cosets::split_blocks(sys, sc, data);
    {
        std::string detail;
        for (const auto& s : transport_failures) detail += (detail.empty() ? "" : "; ") + s;
        rep.add("block maps [P_I^-]w g -> [P_I'^-]w' g are well defined", transport_failures.empty(), detail);
    }
    const auto& Y = split.Y.complex;
    const auto& Yp = split.Yp.complex;

    // Phi: St^-(G) -> Y, a permutation of bases
    auto phi_b = builders(St, Y);
    auto psi_b = builders(Y, St);
    for (GenSet I : cox::subsets_of(W.all())) {
        auto [deg, off] = st.assembled.block.at(I.bits());
        const auto& pl = place.at(I.bits());
        for (std::size_t k = 0; k < pl.size(); ++k) {
            auto [b, j] = pl[k];
            if (b < 0) throw std::logic_error("coset outside every block");
            int row = split.Y.where.at(b).second + j;
            phi_b.at(deg).add(row, off + static_cast<int>(k), Integer(1));
            psi_b.at(deg).add(off + static_cast<int>(k), row, Integer(1));
        }
    }
    auto Phi = build_graded(phi_b);
    auto Psi = build_graded(psi_b);
    rep.add("Res St(G) is the block complex Y", verify_chain_map(Phi, St, Y));
    rep.add("Phi is invertible", detail::check_identity(compose(Psi, Phi, St, Y, St), identity_map(St), St, St, "Psi Phi != Id"));

    // St(L_I0) (x)_{L_I0} Z P_I0 on the cosets (P_I^- cap P_I0) \ P_I0
    std::map<std::uint32_t, std::vector<int>> hid; // element of P_I0 -> coset number
    std::map<std::uint32_t, std::vector<int>> hreps;
    std::map<std::uint32_t, FreeModule> hmods;
    bool levi = true;
    for (GenSet I : cox::subsets_of(i0)) {
        auto H = intersect(bn.parabolic(I).Pm, P0);
        levi = levi && H == intersect(bn.parabolic(I).Pm, L0);
        std::vector<int> id(G.size(), -1), reps;
        for (int x : P0) {
            if (id[x] >= 0) continue;
            for (int h : H) id[G.mul(h, x)] = static_cast<int>(reps.size());
            reps.push_back(x);
        }
        FreeModule m;
        for (int x : reps) m.labels.push_back("H" + std::to_string(x));
        hid[I.bits()] = std::move(id);
        hreps[I.bits()] = std::move(reps);
        hmods[I.bits()] = std::move(m);
    }
    rep.add("P_I^- cap P_I0 = P_I^- cap L_I0", levi);
    auto hcs = make_coeff_system<Integer>(i0, hmods, [&](GenSet J, GenSet I) {
        const auto& rs = hreps.at(I.bits());
        SparseMatrix<Integer> m(static_cast<int>(hreps.at(J.bits()).size()), static_cast<int>(rs.size()));
        for (std::size_t k = 0; k < rs.size(); ++k) m.set_col(static_cast<int>(k), {{hid.at(J.bits())[rs[k]], Integer(1)}});
        return m;
    });
    auto hL = assemble(hcs, order);
    const auto& YL = hL.complex;

    // iota: Y' -> St(L_I0) (x) Z P_I0, [P_I^-] g -> [P_I^- cap L_I0] g
    auto io_b = builders(Yp, YL);
    auto ioi_b = builders(YL, Yp);
    bool iota_ok = true;
    for (int b : split.Yp.members) {
        const auto& a = sys.at(b);
        if (a.d != W.identity() || !a.I.subset_of(i0)) throw std::logic_error("non-kernel block outside W_I0");
        auto [deg, off] = split.Yp.where.at(b);
        int hoff = hL.block.at(a.I.bits()).second;
        const auto& ids = st.cosets.at(a.I.bits()).id;
        std::vector<int> img(members[b].size(), -1);
        for (int g : P0) {
            int j = place.at(a.I.bits())[ids[g]].second;
            int k = hid.at(a.I.bits())[g];
            if (img[j] >= 0 && img[j] != k) iota_ok = false;
            img[j] = k;
        }
        std::vector<int> sorted = img;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t j = 0; j < sorted.size(); ++j) iota_ok = iota_ok && sorted[j] == static_cast<int>(j);
        iota_ok = iota_ok && img.size() == hreps.at(a.I.bits()).size();
        for (std::size_t j = 0; j < img.size(); ++j) {
            io_b.at(deg).add(hoff + img[j], off + static_cast<int>(j), Integer(1));
            ioi_b.at(deg).add(off + static_cast<int>(j), hoff + img[j], Integer(1));
        }
    }
    rep.add("[P_I^-] Z P_I0 = [P_I^- cap L_I0] Z P_I0 on the blocks inside W_I0", iota_ok);
    if (!rep.ok()) {
        res.cert.Y = St;
        return res;
    }
    auto iota = build_graded(io_b);
    auto iota_inv = build_graded(ioi_b);
    rep.add("Y' is St(L_I0) (x)_L Z P_I0", verify_chain_map(iota, Yp, YL));

    auto pi = compose(iota, compose(split.p, Phi, St, Y, Yp), St, Yp, YL);
    auto sec = compose(Psi, compose(split.s, iota_inv, YL, Yp, Y), YL, Y, St);
    rep.add("pi is a chain map", verify_chain_map(pi, St, YL));
    rep.add("pi is split surjective", detail::check_identity(compose(pi, sec, YL, St, YL), identity_map(YL), YL, YL, "pi s != Id"));
    rep.add("sigma-bar d + d sigma-bar = Id on the kernel", verify_contraction(split.kernel.Z, split.kernel.sigma));
    if (!rep.ok()) {
        res.cert.Y = St;
        return res;
    }
    try {
        auto eq = split_equivalence(Y, Yp, split.p, split.s, split.kernel);
        auto& c = res.cert;
        c.Y = St;
        c.Yp = YL;
        c.p = pi;
        c.g = compose(Psi, compose(eq.g, iota_inv, YL, Yp, Y), YL, Y, St);
        c.k = compose(Psi, compose(eq.k, Phi, St, Y, Y), St, Y, St);
        rep.add("split equivalence identities", verify_equivalence(c));
    } catch (const VerificationError& err) {
        rep.add("split equivalence identities", false, err.what());
        return res;
    }
    if (i0.empty()) rep.add("St(T) (x) Z B is concentrated in degree 0", YL.hi() == 0);

    // right action of P_I0 on both sides
    auto st_right = [&](int h) {
        auto bld = builders(St, St);
        for (GenSet I : cox::subsets_of(W.all())) {
            auto [deg, off] = st.assembled.block.at(I.bits());
            const auto& c = st.cosets.at(I.bits());
            for (int k = 0; k < c.count(); ++k) bld.at(deg).add(off + c.id[G.mul(c.reps[k], h)], off + k, Integer(1));
        }
        return build_graded(bld);
    };
    auto yl_right = [&](int h) {
        auto bld = builders(YL, YL);
        for (GenSet I : cox::subsets_of(i0)) {
            auto [deg, off] = hL.block.at(I.bits());
            const auto& rs = hreps.at(I.bits());
            for (std::size_t k = 0; k < rs.size(); ++k)
                bld.at(deg).add(off + hid.at(I.bits())[G.mul(rs[k], h)], off + static_cast<int>(k), Integer(1));
        }
        return build_graded(bld);
    };
    for (int h : bn.generators(P0)) {
        auto A = st_right(h), B = yl_right(h);
        rep.add("p commutes with right " + G.to_string(h), commutes(res.cert.p, A, B, St, YL));
        rep.add("g commutes with right " + G.to_string(h), commutes(res.cert.g, B, A, YL, St));
    }
    return res;
}

// ---------------------------------------------------------------- duality

GroupDuality group_duality_check(const BNPair& bn, int pairs, unsigned seed) {
    const auto& G = bn.group();
    if (G.size() > 24) throw std::invalid_argument("duality check is limited to |G| <= 24");
    auto M = build_XG(bn, default_order(bn.weyl().rank()));
    auto D = dual_complex(M.X);
    const auto& X = M.X.X;
    auto dual_right = [&](int h) {
        auto f = xg_action(M, h, cox::Side::left);
        GradedMap<Rational> out{0, {}};
        for (int deg = X.lo; deg <= X.hi(); ++deg) out.blocks[-deg] = f.at(deg, X, X).transpose();
        return out;
    };
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick(0, G.size() - 1);
    std::vector<std::pair<int, int>> gh;
    std::vector<std::pair<GradedMap<Rational>, GradedMap<Rational>>> induced;
    for (int k = 0; k < pairs; ++k) {
        int g = pick(rng), h = pick(rng);
        gh.emplace_back(g, h);
        induced.emplace_back(xg_action(M, g, cox::Side::left), dual_right(h));
    }
    std::vector<GradedMap<Rational>> maps;
    auto T = tensor_over(M.X, D, induced, &maps);
    GroupDuality out;
    out.lo = T.lo;
    out.ranks = homology_ranks(T);
    out.report.add("X(G) (x)_G X(G)^dual is a complex", verify_complex(T));
    bool conc = T.in_range(0);
    for (int deg = T.lo; deg <= T.hi(); ++deg) {
        int expect = deg == 0 ? G.size() : 0;
        if (out.ranks[deg - T.lo] != expect) conc = false;
    }
    out.report.add("homology is Q^|G| in degree 0", conc);
    // Lefschetz: trace on H^0 is the alternating sum of chain-level traces
    for (std::size_t k = 0; k < gh.size(); ++k) {
        auto [g, h] = gh[k];
        Rational lef = 0;
        for (int deg = T.lo; deg <= T.hi(); ++deg) {
            auto t = trace(maps[k].at(deg, T, T));
            lef += (deg % 2 == 0) ? t : Rational(-t);
        }
        long fixed = 0;
        for (int x = 0; x < G.size(); ++x)
            if (G.mul(G.mul(g, x), h) == x) ++fixed;
        out.report.add("character of H^0 at (" + G.to_string(g) + ", " + G.to_string(h) + ")", lef == Rational(fixed),
                       scalar_string(lef) + " vs " + std::to_string(fixed));
    }
    out.ok = out.report.ok();
    return out;
}

} // namespace hk::bn
