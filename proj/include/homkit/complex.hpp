#pragma once

#include "homkit/coxeter.hpp"
#include "homkit/sparse.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hk {

using cox::GenSet;

/// Free module given by an ordered list of distinct basis labels.
struct FreeModule {
    std::vector<std::string> labels;
    int dim() const { return static_cast<int>(labels.size()); }
};

/// Bounded cochain complex: modules[k] sits in degree lo + k and
/// diffs[k] maps degree lo + k to lo + k + 1.
template <class R> struct Complex {
    int lo = 0;
    std::vector<FreeModule> modules;
    std::vector<SparseMatrix<R>> diffs;

    int hi() const { return lo + static_cast<int>(modules.size()) - 1; }
    bool in_range(int deg) const { return deg >= lo && deg <= hi(); }
    int dim(int deg) const { return in_range(deg) ? modules[deg - lo].dim() : 0; }
    const FreeModule& module(int deg) const { return modules.at(deg - lo); }
    /// Differential from `deg` to `deg + 1`; a zero matrix outside the stored range.
    SparseMatrix<R> d(int deg) const {
        if (in_range(deg) && in_range(deg + 1)) return diffs[deg - lo];
        return SparseMatrix<R>(dim(deg + 1), dim(deg));
    }
    int total_dim() const {
        int n = 0;
        for (const auto& m : modules) n += m.dim();
        return n;
    }
};

/// Family of matrices, one per source degree, of fixed degree `shift`.
/// Missing blocks are zero.
template <class R> struct GradedMap {
    int shift = 0;
    std::map<int, SparseMatrix<R>> blocks;

    SparseMatrix<R> block(int src_deg, int rows, int cols) const {
        auto it = blocks.find(src_deg);
        if (it == blocks.end()) return SparseMatrix<R>(rows, cols);
        if (it->second.rows() != rows || it->second.cols() != cols)
            throw std::invalid_argument("graded map block has wrong shape at degree " + std::to_string(src_deg));
        return it->second;
    }
    /// Block between two complexes.
    SparseMatrix<R> at(int src_deg, const Complex<R>& src, const Complex<R>& dst) const {
        return block(src_deg, dst.dim(src_deg + shift), src.dim(src_deg));
    }
};

/// Contracting homotopy (degree -1) of a complex.
template <class R> struct Contraction {
    Complex<R> target;
    GradedMap<R> sigma{-1, {}};
};

/// Outcome of an exact check; on failure names the first failing degree and basis element.
struct Check {
    bool ok = true;
    std::string what;
    int degree = 0;
    int basis = -1;
    std::string label;

    static Check pass() { return {}; }
    static Check fail(std::string what, int degree = 0, int basis = -1, std::string label = {}) {
        return {false, std::move(what), degree, basis, std::move(label)};
    }
    explicit operator bool() const { return ok; }
    std::string describe() const {
        if (ok) return "ok";
        std::string s = what + " (degree " + std::to_string(degree);
        if (basis >= 0) s += ", basis " + std::to_string(basis);
        if (!label.empty()) s += " '" + label + "'";
        return s + ")";
    }
};

namespace detail {
template <class R> int first_nonzero_col(const SparseMatrix<R>& m) {
    for (int j = 0; j < m.cols(); ++j)
        if (!m.col(j).empty()) return j;
    return -1;
}
template <class R> Check fail_at(const char* what, const Complex<R>& x, int deg, const SparseMatrix<R>& diff) {
    int j = first_nonzero_col(diff);
    std::string lab = (x.in_range(deg) && j >= 0) ? x.module(deg).labels[j] : std::string();
    return Check::fail(what, deg, j, lab);
}
} // namespace detail

/// Exact check of d^2 = 0.
template <class R> Check verify_complex(const Complex<R>& x) {
    if (x.diffs.size() + 1 != x.modules.size() && !(x.modules.empty() && x.diffs.empty()))
        return Check::fail("complex has inconsistent number of differentials");
    for (std::size_t k = 0; k < x.diffs.size(); ++k) {
        const auto& d = x.diffs[k];
        if (d.rows() != x.modules[k + 1].dim() || d.cols() != x.modules[k].dim())
            return Check::fail("differential has wrong shape", x.lo + static_cast<int>(k));
    }
    for (int deg = x.lo; deg + 2 <= x.hi(); ++deg) {
        auto dd = x.d(deg + 1) * x.d(deg);
        if (!dd.is_zero()) return detail::fail_at("d^2 != 0", x, deg, dd);
    }
    return Check::pass();
}

/// Exact check of sigma d + d sigma = Id in every degree.
template <class R> Check verify_contraction(const Complex<R>& x, const GradedMap<R>& sigma) {
    if (sigma.shift != -1) return Check::fail("contraction must have degree -1");
    for (const auto& [deg, m] : sigma.blocks)
        if (m.cols() != x.dim(deg) || m.rows() != x.dim(deg - 1))
            return Check::fail("contraction block has wrong shape", deg);
    for (int deg = x.lo; deg <= x.hi(); ++deg) {
        auto lhs = sigma.at(deg + 1, x, x) * x.d(deg) + x.d(deg - 1) * sigma.at(deg, x, x);
        auto diff = lhs - SparseMatrix<R>::identity(x.dim(deg));
        if (!diff.is_zero()) return detail::fail_at("sigma d + d sigma != Id", x, deg, diff);
    }
    return Check::pass();
}

template <class R> Check verify_contraction(const Contraction<R>& c) { return verify_contraction(c.target, c.sigma); }

/// Exact check that f: x -> y (degree 0) commutes with the differentials.
template <class R> Check verify_chain_map(const GradedMap<R>& f, const Complex<R>& x, const Complex<R>& y) {
    if (f.shift != 0) return Check::fail("chain map must have degree 0");
    int lo = std::min(x.lo, y.lo) - 1;
    int hi = std::max(x.hi(), y.hi()) + 1;
    for (int deg = lo; deg <= hi; ++deg) {
        auto diff = f.at(deg + 1, x, y) * x.d(deg) - y.d(deg) * f.at(deg, x, y);
        if (!diff.is_zero()) return detail::fail_at("f d != d f", x, deg, diff);
    }
    return Check::pass();
}

/// Composition g o f of graded maps x -f-> y -g-> z.
template <class R>
GradedMap<R> compose(const GradedMap<R>& g, const GradedMap<R>& f, const Complex<R>& x, const Complex<R>& y,
                     const Complex<R>& z) {
    GradedMap<R> out{f.shift + g.shift, {}};
    for (int deg = x.lo; deg <= x.hi(); ++deg) {
        auto m = g.at(deg + f.shift, y, z) * f.at(deg, x, y);
        if (!m.is_zero()) out.blocks[deg] = std::move(m);
    }
    return out;
}

/// a + sign * b for graded maps x -> y of the same degree.
template <class R>
GradedMap<R> combine(const GradedMap<R>& a, const GradedMap<R>& b, int sign, const Complex<R>& x,
                     const Complex<R>& y) {
    if (a.shift != b.shift) throw std::invalid_argument("graded maps of different degrees");
    GradedMap<R> out{a.shift, {}};
    for (int deg = x.lo; deg <= x.hi(); ++deg) {
        auto ma = a.at(deg, x, y);
        auto mb = b.at(deg, x, y);
        auto m = sign > 0 ? ma + mb : ma - mb;
        if (!m.is_zero()) out.blocks[deg] = std::move(m);
    }
    return out;
}

template <class R> GradedMap<R> identity_map(const Complex<R>& x) {
    GradedMap<R> out{0, {}};
    for (int deg = x.lo; deg <= x.hi(); ++deg) out.blocks[deg] = SparseMatrix<R>::identity(x.dim(deg));
    return out;
}

/// Coefficient system on the subsets of `universe`: a module per subset and
/// restriction maps rest(J, I) for I subset of J.
template <class R> struct CoeffSystem {
    GenSet universe;
    std::map<std::uint32_t, FreeModule> modules;
    std::map<std::pair<std::uint32_t, std::uint32_t>, SparseMatrix<R>> rest; // key (J, I)

    const FreeModule& mod(GenSet I) const { return modules.at(I.bits()); }
    bool has_rest(GenSet J, GenSet I) const { return rest.count({J.bits(), I.bits()}) > 0; }
    const SparseMatrix<R>& restriction(GenSet J, GenSet I) const { return rest.at({J.bits(), I.bits()}); }
};

/// Builds every restriction rest(J, I), I subset of J, from a callback.
template <class R, class F> CoeffSystem<R> make_coeff_system(GenSet universe, std::map<std::uint32_t, FreeModule> mods, F&& rest_fn) {
    CoeffSystem<R> cs;
    cs.universe = universe;
    cs.modules = std::move(mods);
    for (GenSet I : cox::subsets_of(universe))
        for (GenSet J : cox::subsets_of(universe))
            if (I.subset_of(J) && I != J) cs.rest[{J.bits(), I.bits()}] = rest_fn(J, I);
    return cs;
}

/// Checks rest(K,J) o rest(J,I) = rest(K,I) for every stored triple.
template <class R> Check check_functorial(const CoeffSystem<R>& cs) {
    for (const auto& [key, m] : cs.rest) {
        GenSet J(key.first), I(key.second);
        if (m.cols() != cs.mod(I).dim() || m.rows() != cs.mod(J).dim())
            return Check::fail("restriction " + J.to_string() + "<-" + I.to_string() + " has wrong shape");
    }
    for (const auto& [kij, rji] : cs.rest) {
        GenSet J(kij.first), I(kij.second);
        for (const auto& [kjk, rkj] : cs.rest) {
            if (kjk.second != J.bits()) continue;
            GenSet K(kjk.first);
            if (!cs.has_rest(K, I)) continue;
            if (!(rkj * rji == cs.restriction(K, I)))
                return Check::fail("functoriality fails for (I,J,K) = (" + I.to_string() + "," + J.to_string() + "," +
                                   K.to_string() + ")");
        }
    }
    return Check::pass();
}

/// Total order on S given as the list of generators in increasing order.
using Order = std::vector<int>;

Order default_order(int rank);
/// Position of each generator in the order.
std::vector<int> order_rank(const Order& order, int n);
/// n(I, s): number of elements of I that are smaller than s.
int sign_count(GenSet I, int s, const std::vector<int>& rank);

/// Complex assembled from a coefficient system plus where each subset's module sits.
template <class R> struct Assembled {
    Complex<R> complex;
    std::map<std::uint32_t, std::pair<int, int>> block; // subset -> (degree, offset)
};

/// Assembles the complex of a coefficient system: degree i is the sum of mod(I)
/// over |I| = i (subsets in increasing bitmask order), and d on mod(I) is
/// sum over s not in I of (-1)^{n(I,s)} rest(I+s, I).
template <class R> Assembled<R> assemble(const CoeffSystem<R>& cs, const Order& order) {
    if (auto chk = check_functorial(cs); !chk) throw std::invalid_argument(chk.what);
    const int n = static_cast<int>(order.size());
    const auto rank = order_rank(order, n);
    const int top = cs.universe.size();
    Assembled<R> out;
    out.complex.lo = 0;
    out.complex.modules.resize(top + 1);
    std::vector<int> fill(top + 1, 0);
    for (GenSet I : cox::subsets_of(cs.universe)) {
        int deg = I.size();
        out.block[I.bits()] = {deg, fill[deg]};
        for (const auto& lab : cs.mod(I).labels) out.complex.modules[deg].labels.push_back(I.to_string() + ":" + lab);
        fill[deg] += cs.mod(I).dim();
    }
    std::vector<MatrixBuilder<R>> builders;
    for (int deg = 0; deg < top; ++deg) builders.emplace_back(fill[deg + 1], fill[deg]);
    for (GenSet I : cox::subsets_of(cs.universe)) {
        auto [deg, col0] = out.block[I.bits()];
        for (int s : (cs.universe - I).members()) {
            GenSet J = I.with(s);
            int row0 = out.block[J.bits()].second;
            const auto& r = cs.restriction(J, I);
            R sign = (sign_count(I, s, rank) % 2 == 0) ? R(1) : R(-1);
            builders[deg].add_block(sign * r, row0, col0);
        }
    }
    for (auto& b : builders) out.complex.diffs.push_back(b.build());
    return out;
}

} // namespace hk
