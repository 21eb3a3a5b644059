#pragma once

#include "homkit/scalar.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace hk {

/// Sparse vector: (index, value) pairs sorted by index, no stored zeros.
template <class R> using SparseVec = std::vector<std::pair<int, R>>;

/// Dense scatter buffer for accumulating sparse columns.
template <class R> class Accumulator {
  public:
    explicit Accumulator(int size) : values_(size), used_(size, 0) {}

    void add(int i, const R& v) {
        if (!used_[i]) {
            used_[i] = 1;
            touched_.push_back(i);
            values_[i] = v;
        } else {
            values_[i] += v;
        }
    }
    /// Returns the accumulated vector and resets the buffer.
    SparseVec<R> take() {
        std::sort(touched_.begin(), touched_.end());
        SparseVec<R> out;
        out.reserve(touched_.size());
        for (int i : touched_) {
            if (!is_zero(values_[i])) out.emplace_back(i, std::move(values_[i]));
            values_[i] = R();
            used_[i] = 0;
        }
        touched_.clear();
        return out;
    }

  private:
    std::vector<R> values_;
    std::vector<char> used_;
    std::vector<int> touched_;
};

/// Column-compressed sparse matrix over an exact ring.
template <class R> class SparseMatrix {
  public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(cols) {}

    static SparseMatrix identity(int n) {
        SparseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.data_[i] = {{i, R(1)}};
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const SparseVec<R>& col(int j) const { return data_[j]; }
    /// `v` must be sorted with indices below rows() and no zeros.
    void set_col(int j, SparseVec<R> v) { data_[j] = std::move(v); }

    R at(int i, int j) const {
        const auto& c = data_[j];
        auto it = std::lower_bound(c.begin(), c.end(), i, [](const auto& e, int key) { return e.first < key; });
        return (it != c.end() && it->first == i) ? it->second : R(0);
    }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& c : data_) n += c.size();
        return n;
    }
    bool is_zero() const {
        for (const auto& c : data_)
            if (!c.empty()) return false;
        return true;
    }

    SparseVec<R> apply(const SparseVec<R>& x) const {
        Accumulator<R> acc(rows_);
        for (const auto& [j, xj] : x)
            for (const auto& [i, a] : data_[j]) acc.add(i, a * xj);
        return acc.take();
    }

    SparseMatrix transpose() const {
        SparseMatrix t(cols_, rows_);
        for (int j = 0; j < cols_; ++j)
            for (const auto& [i, a] : data_[j]) t.data_[i].emplace_back(j, a);
        return t;
    }

    /// Entrywise image under a ring map; zero images are dropped.
    template <class F> auto map(F&& f) const {
        using S = decltype(f(std::declval<const R&>()));
        SparseMatrix<S> out(rows_, cols_);
        for (int j = 0; j < cols_; ++j) {
            SparseVec<S> c;
            for (const auto& [i, a] : data_[j]) {
                S v = f(a);
                if (!hk::is_zero(v)) c.emplace_back(i, std::move(v));
            }
            out.set_col(j, std::move(c));
        }
        return out;
    }

    std::vector<std::tuple<int, int, R>> triplets() const {
        std::vector<std::tuple<int, int, R>> out;
        for (int j = 0; j < cols_; ++j)
            for (const auto& [i, a] : data_[j]) out.emplace_back(i, j, a);
        return out;
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
        SparseMatrix c(a.rows_, b.cols_);
        Accumulator<R> acc(a.rows_);
        for (int j = 0; j < b.cols_; ++j) {
            for (const auto& [k, bkj] : b.data_[j])
                for (const auto& [i, aik] : a.data_[k]) acc.add(i, aik * bkj);
            c.data_[j] = acc.take();
        }
        return c;
    }

    friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, b, false); }
    friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, b, true); }
    friend SparseMatrix operator-(const SparseMatrix& a) {
        SparseMatrix r = a;
        for (auto& c : r.data_)
            for (auto& e : c) e.second = -e.second;
        return r;
    }
    friend SparseMatrix operator*(const R& s, const SparseMatrix& a) {
        SparseMatrix r(a.rows_, a.cols_);
        if (hk::is_zero(s)) return r;
        for (int j = 0; j < a.cols_; ++j) {
            for (const auto& [i, v] : a.data_[j]) {
                R p = s * v;
                if (!hk::is_zero(p)) r.data_[j].emplace_back(i, std::move(p));
            }
        }
        return r;
    }
    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

  private:
    static SparseMatrix combine(const SparseMatrix& a, const SparseMatrix& b, bool subtract) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum shape mismatch");
        SparseMatrix c(a.rows_, a.cols_);
        for (int j = 0; j < a.cols_; ++j) {
            const auto& x = a.data_[j];
            const auto& y = b.data_[j];
            SparseVec<R> out;
            std::size_t p = 0, q = 0;
            while (p < x.size() || q < y.size()) {
                if (q == y.size() || (p < x.size() && x[p].first < y[q].first)) {
                    out.push_back(x[p++]);
                } else if (p == x.size() || y[q].first < x[p].first) {
                    out.emplace_back(y[q].first, subtract ? R(-y[q].second) : y[q].second);
                    ++q;
                } else {
                    R v = subtract ? R(x[p].second - y[q].second) : R(x[p].second + y[q].second);
                    if (!hk::is_zero(v)) out.emplace_back(x[p].first, std::move(v));
                    ++p;
                    ++q;
                }
            }
            c.data_[j] = std::move(out);
        }
        return c;
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<SparseVec<R>> data_;
};

/// Collects (row, col, value) contributions in any order; duplicates add up.
template <class R> class MatrixBuilder {
  public:
    MatrixBuilder(int rows, int cols) : rows_(rows), cols_(cols), pending_(cols) {}

    void add(int i, int j, const R& v) {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        if (!is_zero(v)) pending_[j].emplace_back(i, v);
    }
    /// Adds scale * v to column j, with v's indices shifted by `row_offset`.
    void add_col(int j, const SparseVec<R>& v, int row_offset = 0) {
        for (const auto& [i, a] : v) add(i + row_offset, j, a);
    }
    /// Places `block` with its (0,0) entry at (row_offset, col_offset).
    void add_block(const SparseMatrix<R>& block, int row_offset, int col_offset) {
        for (int j = 0; j < block.cols(); ++j)
            for (const auto& [i, a] : block.col(j)) add(i + row_offset, j + col_offset, a);
    }

    SparseMatrix<R> build() {
        SparseMatrix<R> m(rows_, cols_);
        for (int j = 0; j < cols_; ++j) {
            auto& p = pending_[j];
            std::stable_sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            SparseVec<R> out;
            for (auto& e : p) {
                if (!out.empty() && out.back().first == e.first)
                    out.back().second += e.second;
                else
                    out.push_back(std::move(e));
            }
            std::erase_if(out, [](const auto& e) { return is_zero(e.second); });
            m.set_col(j, std::move(out));
            p.clear();
        }
        return m;
    }

  private:
    int rows_;
    int cols_;
    std::vector<SparseVec<R>> pending_;
};

/// Extracts the block rows [r0, r0+nr) x cols [c0, c0+nc).
template <class R> SparseMatrix<R> sub_block(const SparseMatrix<R>& m, int r0, int nr, int c0, int nc) {
    SparseMatrix<R> out(nr, nc);
    for (int j = 0; j < nc; ++j) {
        SparseVec<R> c;
        for (const auto& [i, a] : m.col(c0 + j))
            if (i >= r0 && i < r0 + nr) c.emplace_back(i - r0, a);
        out.set_col(j, std::move(c));
    }
    return out;
}

} // namespace hk
