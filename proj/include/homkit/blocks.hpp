#pragma once

#include "homkit/cosets.hpp"
#include "homkit/equivalence.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hk::cosets {

/// Complex on a direct sum of blocks Y_b, one per coset b of A(I0).
template <class R> struct BlockComplex {
    Complex<R> complex;
    std::vector<int> members;                     // coset indices, in cosets() order
    std::map<int, std::pair<int, int>> where;     // coset index -> (degree, offset)
    std::vector<int> dims;                        // block dimension, indexed like members
    int dim_of(int b) const { return dims[position(b)]; }
    int position(int b) const {
        auto it = std::lower_bound(members.begin(), members.end(), b);
        if (it == members.end() || *it != b) throw std::out_of_range("coset is not a block");
        return static_cast<int>(it - members.begin());
    }
    bool has(int b) const { return std::binary_search(members.begin(), members.end(), b); }
};

/// Block data: the module of each coset and the map Y_b -> Y_b' for b inside b'.
template <class R> struct BlockData {
    std::function<FreeModule(int)> module;
    std::function<SparseMatrix<R>(int, int)> transport; // (b, b')
};

/// d on Y_b is the sum over s not in S(b) of (-1)^{n(S(b),s)} transport(b, b u s).
/// Terms leaving `members` are dropped, which gives the quotient complex when
/// the complement of `members` is a subcomplex.
template <class R>
BlockComplex<R> block_complex(const CosetSystem& sys, std::vector<int> members, const Order& order,
                              const BlockData<R>& data) {
    const auto& G = sys.group();
    std::sort(members.begin(), members.end());
    BlockComplex<R> out;
    out.members = members;
    int top = 0;
    for (int b : members) top = std::max(top, sys.at(b).I.size());
    out.complex.lo = 0;
    out.complex.modules.resize(top + 1);
    std::vector<int> fill(top + 1, 0);
    std::vector<FreeModule> mods;
    for (int b : members) {
        const auto& a = sys.at(b);
        int deg = a.I.size();
        FreeModule m = data.module(b);
        out.where[b] = {deg, fill[deg]};
        out.dims.push_back(m.dim());
        std::string tag = coset_label(G, a) + ":";
        for (const auto& l : m.labels) out.complex.modules[deg].labels.push_back(tag + l);
        fill[deg] += m.dim();
    }
    const auto rank = order_rank(order, G.rank());
    std::vector<MatrixBuilder<R>> builders;
    for (int deg = 0; deg < top; ++deg) builders.emplace_back(fill[deg + 1], fill[deg]);
    for (int b : members) {
        const auto& a = sys.at(b);
        auto [deg, col0] = out.where[b];
        for (int s = 0; s < G.rank(); ++s) {
            if (a.I.contains(s)) continue;
            int b2 = sys.index_of(coset_union(G, a, s));
            if (b2 < 0) throw std::logic_error("A(I0) is not closed under unions");
            auto it = out.where.find(b2);
            if (it == out.where.end()) continue;
            auto t = data.transport(b, b2);
            if (t.cols() != out.dim_of(b) || t.rows() != out.dim_of(b2))
                throw std::invalid_argument("block transport has wrong shape");
            R sign = (sign_count(a.I, s, rank) % 2 == 0) ? R(1) : R(-1);
            builders[deg].add_block(sign * t, it->second.second, col0);
        }
    }
    for (auto& bld : builders) out.complex.diffs.push_back(bld.build());
    return out;
}

/// Coordinate map between two block complexes: the identity on shared blocks.
template <class R> GradedMap<R> block_coordinates(const BlockComplex<R>& src, const BlockComplex<R>& dst) {
    GradedMap<R> f{0, {}};
    std::map<int, MatrixBuilder<R>> bld;
    for (int deg = src.complex.lo; deg <= src.complex.hi(); ++deg)
        bld.emplace(deg, MatrixBuilder<R>(dst.complex.dim(deg), src.complex.dim(deg)));
    for (int b : src.members) {
        if (!dst.has(b)) continue;
        auto [deg, c0] = src.where.at(b);
        int r0 = dst.where.at(b).second;
        for (int i = 0; i < src.dim_of(b); ++i) bld.at(deg).add(r0 + i, c0 + i, R(1));
    }
    for (auto& [deg, b] : bld) {
        auto m = b.build();
        if (!m.is_zero()) f.blocks[deg] = std::move(m);
    }
    return f;
}

/// sigma-bar on the A(I0)+ block complex: z_b -> sum over b' of m(b,b') transport(b, b')(z).
template <class R>
GradedMap<R> lift_sigma(const SigmaCert& cert, const BlockComplex<R>& Z, const BlockData<R>& data) {
    std::map<int, MatrixBuilder<R>> bld;
    for (int deg = Z.complex.lo + 1; deg <= Z.complex.hi(); ++deg)
        bld.emplace(deg, MatrixBuilder<R>(Z.complex.dim(deg - 1), Z.complex.dim(deg)));
    for (const auto& [ab, m] : cert.m) {
        auto [b, b2] = ab;
        if (!Z.has(b) || !Z.has(b2)) throw std::invalid_argument("sigma coefficient outside the kernel blocks");
        auto [deg, c0] = Z.where.at(b);
        int r0 = Z.where.at(b2).second;
        auto t = data.transport(b, b2);
        if (t.cols() != Z.dim_of(b) || t.rows() != Z.dim_of(b2))
            throw std::invalid_argument("block transport has wrong shape");
        bld.at(deg).add_block(R(m.get_si()) * t, r0, c0);
    }
    GradedMap<R> out{-1, {}};
    for (auto& [deg, b] : bld) {
        auto mat = b.build();
        if (!mat.is_zero()) out.blocks[deg] = std::move(mat);
    }
    return out;
}

/// Y over all of A(I0), its quotient Y' on the cosets inside W_{I0}, and the
/// kernel Z on A(I0)+ with its contraction built from sigma.
template <class R> struct BlockSplit {
    BlockComplex<R> Y, Yp, Z;
    GradedMap<R> p{0, {}}, s{0, {}};
    Kernel<R> kernel;
};

template <class R>
BlockSplit<R> split_blocks(const CosetSystem& sys, const SigmaCert& cert, const BlockData<R>& data) {
    std::vector<int> all(sys.size()), minus;
    for (int k = 0; k < sys.size(); ++k) {
        all[k] = k;
        if (!sys.plus(k)) minus.push_back(k);
    }
    BlockSplit<R> out;
    out.Y = block_complex(sys, all, cert.order, data);
    out.Yp = block_complex(sys, minus, cert.order, data);
    out.Z = block_complex(sys, sys.plus_indices(), cert.order, data);
    out.p = block_coordinates(out.Y, out.Yp);
    out.s = block_coordinates(out.Yp, out.Y);
    out.kernel.Z = out.Z.complex;
    out.kernel.incl = block_coordinates(out.Z, out.Y);
    out.kernel.retract = block_coordinates(out.Y, out.Z);
    out.kernel.sigma = lift_sigma(cert, out.Z, data);
    return out;
}

/// Block data of a coefficient system M on the subsets of I0: Y_b = M(I0(b))
/// and transport(b, b') = M's restriction from I0(b) to I0(b').
template <class R> BlockData<R> system_blocks(const CosetSystem& sys, const CoeffSystem<R>& M) {
    BlockData<R> d;
    d.module = [&sys, &M](int b) { return M.mod(sys.i0_of(sys.at(b))); };
    d.transport = [&sys, &M](int b, int b2) {
        GenSet K = sys.i0_of(sys.at(b)), K2 = sys.i0_of(sys.at(b2));
        if (K == K2) return SparseMatrix<R>::identity(M.mod(K).dim());
        if (!K.subset_of(K2)) throw std::invalid_argument("I0-sets of a block map are not nested");
        return M.restriction(K2, K);
    };
    return d;
}

/// Contraction of Z = sum over b in A(I0)+ of Z_b, Z_b a sub-basis of
/// M(I0(b)) given by `sub`, with the differential and sigma-bar induced from M.
/// Throws VerificationError when the restrictions do not preserve the Z_b or
/// the contraction identity fails.
template <class R>
Contraction<R> theorem_contract(const CosetSystem& sys, const SigmaCert& cert, const CoeffSystem<R>& M,
                                const std::function<std::vector<int>(int)>& sub) {
    auto full = system_blocks(sys, M);
    BlockData<R> d;
    d.module = [&](int b) {
        FreeModule all = full.module(b), part;
        for (int i : sub(b)) part.labels.push_back(all.labels.at(i));
        return part;
    };
    d.transport = [&](int b, int b2) {
        auto t = full.transport(b, b2);
        auto cols = sub(b), rows = sub(b2);
        std::vector<int> pos(t.rows(), -1);
        for (std::size_t i = 0; i < rows.size(); ++i) pos[rows[i]] = static_cast<int>(i);
        SparseMatrix<R> out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j) {
            SparseVec<R> c;
            for (const auto& [i, v] : t.col(cols[j])) {
                if (pos[i] < 0)
                    throw VerificationError(Check::fail("restriction leaves the kernel block " +
                                                        coset_label(sys.group(), sys.at(b2))));
                c.emplace_back(pos[i], v);
            }
            std::sort(c.begin(), c.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
            out.set_col(static_cast<int>(j), std::move(c));
        }
        return out;
    };
    auto Z = block_complex(sys, sys.plus_indices(), cert.order, d);
    Contraction<R> c{Z.complex, lift_sigma(cert, Z, d)};
    require(verify_complex(c.target), "kernel complex");
    require(verify_contraction(c), "kernel contraction");
    return c;
}

} // namespace hk::cosets
