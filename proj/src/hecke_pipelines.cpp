#include "homkit/blocks.hpp"
#include "homkit/hecke.hpp"

#include <stdexcept>

namespace hk::hecke {

namespace {

using cosets::BlockComplex;
using cosets::CosetSystem;

GradedMap<Laurent> build_graded(std::map<int, MatrixBuilder<Laurent>>& bld) {
    GradedMap<Laurent> out{0, {}};
    for (auto& [deg, b] : bld) {
        auto m = b.build();
        if (!m.is_zero()) out.blocks[deg] = std::move(m);
    }
    return out;
}

std::map<int, MatrixBuilder<Laurent>> builders(const Complex<Laurent>& src, const Complex<Laurent>& dst) {
    std::map<int, MatrixBuilder<Laurent>> bld;
    for (int deg = src.lo; deg <= src.hi(); ++deg) bld.emplace(deg, MatrixBuilder<Laurent>(dst.dim(deg), src.dim(deg)));
    return bld;
}

// Action of x on the left (or of y on the right) of every block H (x)_{H_K} H_{I0}.
GradedMap<Laurent> block_action(const HParams& P, const CosetSystem& sys, const BlockComplex<Laurent>& B,
                                const HeckeElem& x, const HeckeElem& y) {
    auto bld = builders(B.complex, B.complex);
    for (int b : B.members) {
        TensorSpace T(P.group(), sys.i0_of(sys.at(b)), sys.i0());
        auto [deg, off] = B.where.at(b);
        bld.at(deg).add_block(tensor_action(P, T, x, y), off, off);
    }
    return build_graded(bld);
}

Check commutes(const GradedMap<Laurent>& f, const GradedMap<Laurent>& a_src, const GradedMap<Laurent>& a_dst,
               const Complex<Laurent>& src, const Complex<Laurent>& dst) {
    for (int deg = src.lo; deg <= src.hi(); ++deg) {
        auto diff = f.at(deg, src, dst) * a_src.at(deg, src, src) - a_dst.at(deg, dst, dst) * f.at(deg, src, dst);
        if (!diff.is_zero()) return detail::fail_at("map does not commute with the action", src, deg, diff);
    }
    return Check::pass();
}

} // namespace

Thm17Result theorem17_certificate(const HParams& P, GenSet i0, const Order& order) {
    const auto& G = P.group();
    if (!i0.subset_of(G.all()) || i0 == G.all()) throw std::invalid_argument("I0 must be a proper subset of S");
    Thm17Result res;
    auto& rep = res.report;
    CosetSystem sys(G, i0);
    auto sc = cosets::build_sigma(sys, order);
    auto M = tensor_system(P, i0, i0);
    auto data = cosets::system_blocks(sys, M);
    auto split = cosets::split_blocks(sys, sc, data);
    const auto& Y = split.Y.complex;
    const auto& Yp = split.Yp.complex;
    rep.add("Y is a complex", verify_complex(Y));
    {
        auto ind = assemble(M, order).complex;
        bool same = ind.modules.size() == Yp.modules.size();
        for (int deg = Yp.lo; same && deg < Yp.hi(); ++deg) same = ind.d(deg) == Yp.d(deg);
        rep.add("Y' is H (x)_{H_I0} X(H_I0)", same);
    }

    auto XM = build_XH(P, order);
    const auto& X = XM.X;

    // Phi: X -> Y on h_d (x)_I h_x, x = u w v with u in W_I, w in D_{I,I0}, v in W_{I0}
    auto phi_b = builders(X, Y);
    for (const auto& [bits, T] : XM.spaces) {
        GenSet I(bits);
        auto [deg, off] = XM.block.at(bits);
        for (int i = 0; i < T.dim(); ++i) {
            auto [d, x] = T.at(i);
            auto rs = G.coset_min_rep(I, x, cox::Side::right); // x = u x'
            auto ls = G.coset_min_rep(i0, rs.d, cox::Side::left); // x' = w v
            Elem w = ls.d, v = ls.u;
            if (G.length(rs.d) != G.length(w) + G.length(v) || !G.in_dist(w, I, i0))
                throw std::logic_error("double coset factorization failed");
            int b = sys.index_of(cosets::make_coset(G, I, w));
            if (b < 0 || sys.at(b).d != w) throw std::logic_error("double coset is not a block");
            GenSet K = sys.i0_of(sys.at(b));
            if (K != (G.conjugate_into(I, w) & i0)) throw std::logic_error("I0-set of a block disagrees with I^w");
            TensorSpace Tb(G, K, i0);
            auto left = h_mul(P, h_basis(G.mul(d, rs.u)), h_basis(w));
            auto img = tensor_normalize(P, Tb, left, h_basis(v));
            phi_b.at(deg).add_col(off + i, img, split.Y.where.at(b).second);
        }
    }
    auto Phi = build_graded(phi_b);

    // Psi: h_d' (x)_K h_v -> h_d' h_w^-1 (x)_I h_{wv}
    auto psi_b = builders(Y, X);
    for (int b : split.Y.members) {
        const auto& a = sys.at(b);
        Elem w = a.d;
        TensorSpace Tb(G, sys.i0_of(a), i0);
        const auto& TI = XM.spaces.at(a.I.bits());
        auto [deg, off] = split.Y.where.at(b);
        int xoff = XM.block.at(a.I.bits()).second;
        auto winv = h_inv(P, w);
        for (int i = 0; i < Tb.dim(); ++i) {
            auto [d, v] = Tb.at(i);
            auto img = tensor_normalize(P, TI, h_mul(P, h_basis(d), winv), h_basis(G.mul(w, v)));
            psi_b.at(deg).add_col(off + i, img, xoff);
        }
    }
    auto Psi = build_graded(psi_b);
    rep.add("Phi is a chain map", verify_chain_map(Phi, X, Y));
    rep.add("Psi Phi = Id", detail::check_identity(compose(Psi, Phi, X, Y, X), identity_map(X), X, X, "Psi Phi != Id"));
    rep.add("Phi Psi = Id", detail::check_identity(compose(Phi, Psi, Y, X, Y), identity_map(Y), Y, Y, "Phi Psi != Id"));
    if (!rep.ok()) throw VerificationError(Check::fail(rep.first_failure()));

    auto eq = split_equivalence(Y, Yp, split.p, split.s, split.kernel);
    auto& c = res.cert;
    c.Y = X;
    c.Yp = Yp;
    c.p = compose(eq.p, Phi, X, Y, Yp);
    c.g = compose(Psi, eq.g, Yp, Y, X);
    c.k = compose(Psi, compose(eq.k, Phi, X, Y, Y), X, Y, X);
    rep.add("equivalence identities on X(H)", verify_equivalence(c));

    const HeckeElem one = h_basis(G.identity());
    for (int s = 0; s < G.rank(); ++s) {
        auto hs = h_basis(G.gen(s));
        auto LX = xh_action(P, XM, hs, cox::Side::left);
        auto LY = block_action(P, sys, split.Yp, hs, one);
        std::string tag = "s" + std::to_string(s + 1);
        rep.add("p commutes with left " + tag, commutes(c.p, LX, LY, X, Yp));
        rep.add("g commutes with left " + tag, commutes(c.g, LY, LX, Yp, X));
        if (!i0.contains(s)) continue;
        auto RX = xh_action(P, XM, hs, cox::Side::right);
        auto RY = block_action(P, sys, split.Yp, one, hs);
        rep.add("p commutes with right " + tag, commutes(c.p, RX, RY, X, Yp));
        rep.add("g commutes with right " + tag, commutes(c.g, RY, RX, Yp, X));
    }
    return res;
}

} // namespace hk::hecke
