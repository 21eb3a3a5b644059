#include "homkit/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace hk {

SparseVec<Rational> axpy(const SparseVec<Rational>& a, const Rational& c, const SparseVec<Rational>& b) {
    SparseVec<Rational> out;
    out.reserve(a.size() + b.size());
    std::size_t p = 0, q = 0;
    while (p < a.size() || q < b.size()) {
        if (q == b.size() || (p < a.size() && a[p].first < b[q].first)) {
            out.push_back(a[p++]);
        } else if (p == a.size() || b[q].first < a[p].first) {
            out.emplace_back(b[q].first, Rational(-c * b[q].second));
            ++q;
        } else {
            Rational v = a[p].second - c * b[q].second;
            if (!is_zero(v)) out.emplace_back(a[p].first, std::move(v));
            ++p;
            ++q;
        }
    }
    return out;
}

SparseVec<Rational> Echelon::reduce(SparseVec<Rational> v, bool full) const {
    std::size_t k = 0;
    while (k < v.size()) {
        int i = v[k].first;
        int r = row_of_[i];
        if (r < 0) {
            if (!full) break;
            ++k;
            continue;
        }
        Rational c = v[k].second;
        v = axpy(v, c, rows_[r]);
    }
    return v;
}

bool Echelon::insert(SparseVec<Rational> v) {
    v = reduce(std::move(v), false);
    if (v.empty()) return false;
    Rational lead = v[0].second;
    for (auto& e : v) e.second /= lead;
    row_of_[v[0].first] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(v));
    return true;
}

namespace {

// Gauss-Jordan on a list of vectors keeping every row fully reduced and
// tracking how each row is combined from the inputs. Inputs that reduce to
// zero contribute their combination to `deps`.
struct Reducer {
    std::vector<int> row_of;
    std::vector<SparseVec<Rational>> rows, combos;
    std::vector<int> pivot;
    std::vector<SparseVec<Rational>> deps;

    explicit Reducer(int dim) : row_of(dim, -1) {}

    void add(SparseVec<Rational> v, SparseVec<Rational> c) {
        for (std::size_t k = 0; k < v.size();) {
            int r = row_of[v[k].first];
            if (r < 0) {
                ++k;
                continue;
            }
            Rational f = v[k].second;
            v = axpy(v, f, rows[r]);
            c = axpy(c, f, combos[r]);
        }
        if (v.empty()) {
            deps.push_back(std::move(c));
            return;
        }
        Rational lead = v[0].second;
        for (auto& e : v) e.second /= lead;
        for (auto& e : c) e.second /= lead;
        int p = v[0].first;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            Rational f;
            bool hit = false;
            for (const auto& [i, x] : rows[r])
                if (i == p) {
                    f = x;
                    hit = true;
                    break;
                } else if (i > p) {
                    break;
                }
            if (!hit) continue;
            rows[r] = axpy(rows[r], f, v);
            combos[r] = axpy(combos[r], f, c);
        }
        row_of[p] = static_cast<int>(rows.size());
        pivot.push_back(p);
        rows.push_back(std::move(v));
        combos.push_back(std::move(c));
    }
};

} // namespace

Subspace::Subspace(int ambient, const std::vector<SparseVec<Rational>>& spanning)
    : ambient_(ambient), pos_of_pivot_(ambient, -1) {
    Reducer red(ambient);
    for (std::size_t j = 0; j < spanning.size(); ++j) red.add(spanning[j], {{static_cast<int>(j), Rational(1)}});
    std::vector<int> idx(red.rows.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return red.pivot[a] < red.pivot[b]; });
    for (int r : idx) {
        pos_of_pivot_[red.pivot[r]] = static_cast<int>(basis_.size());
        pivots_.push_back(red.pivot[r]);
        basis_.push_back(std::move(red.rows[r]));
        combos_.push_back(std::move(red.combos[r]));
    }
}

std::optional<SparseVec<Rational>> Subspace::coords(const SparseVec<Rational>& v) const {
    SparseVec<Rational> c;
    Accumulator<Rational> acc(ambient_);
    for (const auto& [i, x] : v) {
        acc.add(i, x);
        int r = pos_of_pivot_[i];
        if (r >= 0) c.emplace_back(r, x);
    }
    for (const auto& [r, x] : c)
        for (const auto& [i, y] : basis_[r]) acc.add(i, -x * y);
    if (!acc.take().empty()) return std::nullopt;
    std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return c;
}

std::optional<SparseMatrix<Rational>> inverse(const SparseMatrix<Rational>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of a non-square matrix");
    std::vector<SparseVec<Rational>> cols;
    for (int j = 0; j < m.cols(); ++j) cols.push_back(m.col(j));
    Subspace sp(m.rows(), cols);
    if (sp.dim() != m.rows()) return std::nullopt;
    SparseMatrix<Rational> inv(m.cols(), m.rows());
    for (int r = 0; r < sp.dim(); ++r) inv.set_col(sp.pivots()[r], sp.combo(r));
    return inv;
}

std::vector<SparseVec<Rational>> nullspace(const SparseMatrix<Rational>& m) {
    Reducer red(m.rows());
    for (int j = 0; j < m.cols(); ++j) red.add(m.col(j), {{j, Rational(1)}});
    return std::move(red.deps);
}

int rank(const SparseMatrix<Rational>& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    std::vector<int> cols(m.cols());
    std::iota(cols.begin(), cols.end(), 0);
    // sparse columns first keeps fill-in down
    std::stable_sort(cols.begin(), cols.end(), [&](int a, int b) { return m.col(a).size() < m.col(b).size(); });
    Echelon e(m.rows());
    for (int j : cols) {
        e.insert(m.col(j));
        if (e.rank() == m.rows()) break;
    }
    return e.rank();
}

Quotient quotient_by(int dim, const std::vector<SparseVec<Rational>>& relations) {
    Echelon e(dim);
    for (const auto& r : relations) e.insert(r);
    Quotient q;
    std::vector<int> pos(dim, -1);
    for (int i = 0; i < dim; ++i)
        if (!e.is_pivot(i)) {
            pos[i] = static_cast<int>(q.free.size());
            q.free.push_back(i);
        }
    q.project = SparseMatrix<Rational>(static_cast<int>(q.free.size()), dim);
    for (int j = 0; j < dim; ++j) {
        auto v = e.reduce({{j, Rational(1)}});
        for (auto& [i, c] : v) i = pos[i];
        q.project.set_col(j, std::move(v));
    }
    return q;
}

DenseInt to_dense(const SparseMatrix<Integer>& a) {
    DenseInt d(a.rows(), std::vector<Integer>(a.cols()));
    for (int j = 0; j < a.cols(); ++j)
        for (const auto& [i, v] : a.col(j)) d[i][j] = v;
    return d;
}

DenseInt dense_mul(const DenseInt& a, const DenseInt& b) {
    const std::size_t m = a.size(), k = b.size(), n = k ? b[0].size() : 0;
    DenseInt c(m, std::vector<Integer>(n));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (is_zero(a[i][t])) continue;
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][t] * b[t][j];
        }
    return c;
}

Integer dense_det(DenseInt a) {
    // fraction-free Bareiss elimination
    const std::size_t n = a.size();
    if (n == 0) return 1;
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (is_zero(a[k][k])) {
            std::size_t r = k + 1;
            while (r < n && is_zero(a[r][k])) ++r;
            if (r == n) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

namespace {

int cmpabs(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

struct SmithState {
    DenseInt a, u, v;
    bool track;
    std::size_t m, n;

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        std::swap(a[i], a[j]);
        if (track) std::swap(u[i], u[j]);
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (auto& row : a) std::swap(row[i], row[j]);
        if (track)
            for (auto& row : v) std::swap(row[i], row[j]);
    }
    // row i -= c * row t
    void row_sub(std::size_t i, std::size_t t, const Integer& c) {
        for (std::size_t j = 0; j < n; ++j)
            if (!is_zero(a[t][j])) a[i][j] -= c * a[t][j];
        if (track)
            for (std::size_t j = 0; j < m; ++j)
                if (!is_zero(u[t][j])) u[i][j] -= c * u[t][j];
    }
    // col j -= c * col t
    void col_sub(std::size_t j, std::size_t t, const Integer& c) {
        for (std::size_t i = 0; i < m; ++i)
            if (!is_zero(a[i][t])) a[i][j] -= c * a[i][t];
        if (track)
            for (std::size_t i = 0; i < n; ++i)
                if (!is_zero(v[i][t])) v[i][j] -= c * v[i][t];
    }
    void negate_row(std::size_t i) {
        for (auto& x : a[i]) x = -x;
        if (track)
            for (auto& x : u[i]) x = -x;
    }
};

DenseInt identity_dense(std::size_t n) {
    DenseInt d(n, std::vector<Integer>(n));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 1;
    return d;
}

} // namespace

SmithForm smith_normal_form(const SparseMatrix<Integer>& mat, bool with_transforms) {
    SmithState st{to_dense(mat), {}, {}, with_transforms, static_cast<std::size_t>(mat.rows()),
                  static_cast<std::size_t>(mat.cols())};
    if (with_transforms) {
        st.u = identity_dense(st.m);
        st.v = identity_dense(st.n);
    }
    auto& a = st.a;
    SmithForm out;
    for (std::size_t t = 0; t < std::min(st.m, st.n); ++t) {
        // pivot: smallest nonzero absolute value in the remaining block
        std::size_t pi = st.m, pj = st.n;
        for (std::size_t i = t; i < st.m; ++i)
            for (std::size_t j = t; j < st.n; ++j)
                if (!is_zero(a[i][j]) && (pi == st.m || cmpabs(a[i][j], a[pi][pj]) < 0)) {
                    pi = i;
                    pj = j;
                }
        if (pi == st.m) break;
        st.swap_rows(t, pi);
        st.swap_cols(t, pj);
        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < st.m; ++i) {
                if (is_zero(a[i][t])) continue;
                Integer c;
                mpz_tdiv_q(c.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                st.row_sub(i, t, c);
                if (!is_zero(a[i][t])) clean = false;
            }
            for (std::size_t j = t + 1; j < st.n; ++j) {
                if (is_zero(a[t][j])) continue;
                Integer c;
                mpz_tdiv_q(c.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                st.col_sub(j, t, c);
                if (!is_zero(a[t][j])) clean = false;
            }
            if (!clean) {
                // a smaller remainder appeared in row or column t: move it to the pivot
                std::size_t bi = t, bj = t;
                for (std::size_t i = t + 1; i < st.m; ++i)
                    if (!is_zero(a[i][t]) && cmpabs(a[i][t], a[bi][bj]) < 0) {
                        bi = i;
                        bj = t;
                    }
                for (std::size_t j = t + 1; j < st.n; ++j)
                    if (!is_zero(a[t][j]) && cmpabs(a[t][j], a[bi][bj]) < 0) {
                        bi = t;
                        bj = j;
                    }
                st.swap_rows(t, bi);
                st.swap_cols(t, bj);
                continue;
            }
            std::size_t bad = st.m;
            for (std::size_t i = t + 1; i < st.m && bad == st.m; ++i)
                for (std::size_t j = t + 1; j < st.n; ++j)
                    if (!mpz_divisible_p(a[i][j].get_mpz_t(), a[t][t].get_mpz_t())) {
                        bad = i;
                        break;
                    }
            if (bad == st.m) break;
            st.row_sub(t, bad, Integer(-1));
        }
        if (sgn(a[t][t]) < 0) st.negate_row(t);
        out.invariants.push_back(a[t][t]);
    }
    if (with_transforms) {
        out.U = std::move(st.u);
        out.V = std::move(st.v);
    }
    return out;
}

std::vector<HomologyDegree> homology_int(const Complex<Integer>& x) {
    std::vector<HomologyDegree> out;
    std::vector<SmithForm> snf;
    for (int deg = x.lo - 1; deg <= x.hi(); ++deg) snf.push_back(smith_normal_form(x.d(deg)));
    for (int deg = x.lo; deg <= x.hi(); ++deg) {
        const auto& in = snf[deg - x.lo];      // d(deg-1)
        const auto& outg = snf[deg - x.lo + 1]; // d(deg)
        HomologyDegree h;
        h.degree = deg;
        h.free_rank = x.dim(deg) - static_cast<int>(in.invariants.size()) - static_cast<int>(outg.invariants.size());
        for (const auto& d : in.invariants)
            if (d > 1) h.torsion.push_back(d);
        out.push_back(std::move(h));
    }
    return out;
}

std::vector<int> homology_ranks(const Complex<Rational>& x) {
    std::vector<int> ranks;
    for (int deg = x.lo - 1; deg <= x.hi(); ++deg) ranks.push_back(rank(x.d(deg)));
    std::vector<int> out;
    for (int deg = x.lo; deg <= x.hi(); ++deg)
        out.push_back(x.dim(deg) - ranks[deg - x.lo] - ranks[deg - x.lo + 1]);
    return out;
}

Complex<Rational> to_rational(const Complex<Integer>& x) {
    Complex<Rational> r;
    r.lo = x.lo;
    r.modules = x.modules;
    for (const auto& d : x.diffs) r.diffs.push_back(d.map([](const Integer& v) { return Rational(v); }));
    return r;
}

SparseMatrix<Rational> specialize(const SparseMatrix<Laurent>& m, std::span<const Rational> values) {
    return m.map([&](const Laurent& v) { return v.evaluate(values); });
}

Complex<Rational> specialize(const Complex<Laurent>& x, std::span<const Rational> values) {
    Complex<Rational> r;
    r.lo = x.lo;
    r.modules = x.modules;
    for (const auto& d : x.diffs) r.diffs.push_back(specialize(d, values));
    return r;
}

} // namespace hk
