#include "homkit/bimodule.hpp"

#include "homkit/linalg.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace hk {

Report check_actions(const ActedComplex& x) {
    Report r;
    for (std::size_t i = 0; i < x.left.size(); ++i) r.add("left action " + std::to_string(i) + " is a chain map", verify_chain_map(x.left[i], x.X, x.X));
    for (std::size_t i = 0; i < x.right.size(); ++i) r.add("right action " + std::to_string(i) + " is a chain map", verify_chain_map(x.right[i], x.X, x.X));
    for (std::size_t i = 0; i < x.left.size(); ++i)
        for (std::size_t j = 0; j < x.right.size(); ++j) {
            bool ok = true;
            for (int deg = x.X.lo; deg <= x.X.hi() && ok; ++deg) {
                auto l = x.left[i].at(deg, x.X, x.X), rr = x.right[j].at(deg, x.X, x.X);
                ok = (l * rr) == (rr * l);
            }
            r.add("left " + std::to_string(i) + " commutes with right " + std::to_string(j), ok);
        }
    return r;
}

namespace {

GradedMap<Rational> dual_action(const GradedMap<Rational>& f, const Complex<Rational>& x) {
    GradedMap<Rational> out{0, {}};
    for (int deg = x.lo; deg <= x.hi(); ++deg) out.blocks[-deg] = f.at(deg, x, x).transpose();
    return out;
}

} // namespace

ActedComplex dual_complex(const ActedComplex& x) {
    ActedComplex d;
    const auto& X = x.X;
    d.X.lo = -X.hi();
    for (int deg = X.hi(); deg >= X.lo; --deg) {
        FreeModule m;
        for (const auto& l : X.module(deg).labels) m.labels.push_back("dual:" + l);
        d.X.modules.push_back(std::move(m));
    }
    // (X^v)^{-n-1} -> (X^v)^{-n} is the transpose of d: X^n -> X^{n+1}
    for (int deg = X.hi() - 1; deg >= X.lo; --deg) {
        auto t = X.d(deg).transpose();
        d.X.diffs.push_back(deg % 2 != 0 ? -t : t);
    }
    for (const auto& f : x.right) d.left.push_back(dual_action(f, X));
    for (const auto& f : x.left) d.right.push_back(dual_action(f, X));
    return d;
}

Complex<Rational> tensor_over(const ActedComplex& x, const ActedComplex& y,
                              const std::vector<std::pair<GradedMap<Rational>, GradedMap<Rational>>>& induced,
                              std::vector<GradedMap<Rational>>* maps) {
    if (x.right.size() != y.left.size()) throw std::invalid_argument("tensor product needs matching generator lists");
    const auto& X = x.X;
    const auto& Y = y.X;
    struct Piece {
        int i, j, offset;
        Quotient q;
    };
    std::map<std::pair<int, int>, Piece> pieces;
    Complex<Rational> out;
    out.lo = X.lo + Y.lo;
    const int hi = X.hi() + Y.hi();
    out.modules.resize(hi - out.lo + 1);
    for (int n = out.lo; n <= hi; ++n) {
        int offset = 0;
        for (int i = X.lo; i <= X.hi(); ++i) {
            int j = n - i;
            if (!Y.in_range(j)) continue;
            const int nx = X.dim(i), ny = Y.dim(j);
            std::vector<SparseVec<Rational>> rels;
            for (std::size_t a = 0; a < x.right.size(); ++a) {
                auto rx = x.right[a].at(i, X, X), ly = y.left[a].at(j, Y, Y);
                for (int bx = 0; bx < nx; ++bx)
                    for (int by = 0; by < ny; ++by) {
                        Accumulator<Rational> acc(nx * ny);
                        for (const auto& [k, c] : rx.col(bx)) acc.add(k * ny + by, c);
                        for (const auto& [k, c] : ly.col(by)) acc.add(bx * ny + k, -c);
                        auto v = acc.take();
                        if (!v.empty()) rels.push_back(std::move(v));
                    }
            }
            Piece p{i, j, offset, quotient_by(nx * ny, rels)};
            for (int f : p.q.free)
                out.modules[n - out.lo].labels.push_back(X.module(i).labels[f / ny] + " * " + Y.module(j).labels[f % ny]);
            offset += static_cast<int>(p.q.free.size());
            pieces.emplace(std::make_pair(i, j), std::move(p));
        }
    }
    for (int n = out.lo; n < hi; ++n) {
        MatrixBuilder<Rational> b(out.dim(n + 1), out.dim(n));
        for (const auto& [key, p] : pieces) {
            if (p.i + p.j != n) continue;
            const int ny = Y.dim(p.j);
            const int sign = (p.i % 2 == 0) ? 1 : -1;
            auto dx = X.d(p.i), dy = Y.d(p.j);
            auto tx = pieces.find({p.i + 1, p.j});
            auto ty = pieces.find({p.i, p.j + 1});
            for (std::size_t c = 0; c < p.q.free.size(); ++c) {
                int f = p.q.free[c];
                int bx = f / ny, by = f % ny;
                if (tx != pieces.end()) {
                    SparseVec<Rational> v;
                    for (const auto& [k, a] : dx.col(bx)) v.emplace_back(k * ny + by, a);
                    std::sort(v.begin(), v.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
                    b.add_col(static_cast<int>(c) + p.offset, tx->second.q.project.apply(v), tx->second.offset);
                }
                if (ty != pieces.end()) {
                    const int ny2 = Y.dim(p.j + 1);
                    SparseVec<Rational> v;
                    for (const auto& [k, a] : dy.col(by)) v.emplace_back(bx * ny2 + k, sign > 0 ? a : Rational(-a));
                    b.add_col(static_cast<int>(c) + p.offset, ty->second.q.project.apply(v), ty->second.offset);
                }
            }
        }
        out.diffs.push_back(b.build());
    }
    if (maps) {
        maps->clear();
        for (const auto& [f, h] : induced) {
            GradedMap<Rational> m{0, {}};
            for (int n = out.lo; n <= hi; ++n) {
                MatrixBuilder<Rational> b(out.dim(n), out.dim(n));
                for (const auto& [key, p] : pieces) {
                    if (p.i + p.j != n) continue;
                    const int ny = Y.dim(p.j);
                    auto fx = f.at(p.i, X, X), hy = h.at(p.j, Y, Y);
                    for (std::size_t c = 0; c < p.q.free.size(); ++c) {
                        int bx = p.q.free[c] / ny, by = p.q.free[c] % ny;
                        Accumulator<Rational> acc(X.dim(p.i) * ny);
                        for (const auto& [k, a] : fx.col(bx))
                            for (const auto& [l, e] : hy.col(by)) acc.add(k * ny + l, a * e);
                        b.add_col(static_cast<int>(c) + p.offset, p.q.project.apply(acc.take()), p.offset);
                    }
                }
                auto mat = b.build();
                if (!mat.is_zero()) m.blocks[n] = std::move(mat);
            }
            maps->push_back(std::move(m));
        }
    }
    return out;
}

} // namespace hk
