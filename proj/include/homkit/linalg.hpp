#pragma once

#include "homkit/complex.hpp"

#include <optional>
#include <span>
#include <vector>

namespace hk {

/// Row echelon form over Q built one vector at a time. Each stored row has
/// leading coefficient 1 at its pivot, which is its smallest index.
class Echelon {
  public:
    explicit Echelon(int dim) : dim_(dim), row_of_(dim, -1) {}

    int dim() const { return dim_; }
    int rank() const { return static_cast<int>(rows_.size()); }
    bool is_pivot(int i) const { return row_of_[i] >= 0; }

    /// Reduces v by the stored rows. With full=true the residual has no
    /// pivot coordinates at all; otherwise only its leading index is reduced.
    SparseVec<Rational> reduce(SparseVec<Rational> v, bool full = true) const;
    /// Adds v to the span; returns false if v was already in it.
    bool insert(SparseVec<Rational> v);
    bool contains(const SparseVec<Rational>& v) const { return reduce(v, false).empty(); }

  private:
    int dim_;
    std::vector<int> row_of_;
    std::vector<SparseVec<Rational>> rows_;
};

/// Subspace of Q^ambient spanned by a list of vectors, stored as a fully
/// reduced echelon basis. Each basis vector remembers how it was combined
/// from the spanning list, so maps defined on the spanning vectors can be
/// evaluated on the basis.
class Subspace {
  public:
    Subspace(int ambient, const std::vector<SparseVec<Rational>>& spanning);

    int ambient() const { return ambient_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<SparseVec<Rational>>& basis() const { return basis_; }
    const std::vector<int>& pivots() const { return pivots_; }
    /// basis()[i] = sum over j of combo(i)[j] * spanning[j].
    const SparseVec<Rational>& combo(int i) const { return combos_[i]; }
    /// Coordinates of v in basis(), or nullopt when v is not in the subspace.
    std::optional<SparseVec<Rational>> coords(const SparseVec<Rational>& v) const;
    bool contains(const SparseVec<Rational>& v) const { return coords(v).has_value(); }

  private:
    int ambient_;
    std::vector<SparseVec<Rational>> basis_, combos_;
    std::vector<int> pivots_;
    std::vector<int> pos_of_pivot_;
};

/// Exact inverse of a square matrix over Q; nullopt when singular.
std::optional<SparseMatrix<Rational>> inverse(const SparseMatrix<Rational>& m);

/// Basis of the null space {x : m x = 0}.
std::vector<SparseVec<Rational>> nullspace(const SparseMatrix<Rational>& m);

/// a - c * b for sparse vectors.
SparseVec<Rational> axpy(const SparseVec<Rational>& a, const Rational& c, const SparseVec<Rational>& b);

int rank(const SparseMatrix<Rational>& m);
/// Quotient of Q^dim by the span of `relations`: `free` lists the surviving
/// coordinates and `project` sends Q^dim onto Q^free.size().
struct Quotient {
    std::vector<int> free;
    SparseMatrix<Rational> project;
};
Quotient quotient_by(int dim, const std::vector<SparseVec<Rational>>& relations);

using DenseInt = std::vector<std::vector<Integer>>;

struct SmithForm {
    std::vector<Integer> invariants; // positive, each divides the next
    DenseInt U, V;                   // U * A * V = diag(invariants), when requested
};
SmithForm smith_normal_form(const SparseMatrix<Integer>& a, bool with_transforms = false);
DenseInt to_dense(const SparseMatrix<Integer>& a);
DenseInt dense_mul(const DenseInt& a, const DenseInt& b);
Integer dense_det(DenseInt a);

struct HomologyDegree {
    int degree = 0;
    int free_rank = 0;
    std::vector<Integer> torsion; // invariant factors > 1
};
std::vector<HomologyDegree> homology_int(const Complex<Integer>& x);
/// Betti numbers over Q, one entry per degree lo..hi.
std::vector<int> homology_ranks(const Complex<Rational>& x);

Complex<Rational> to_rational(const Complex<Integer>& x);
SparseMatrix<Rational> specialize(const SparseMatrix<Laurent>& m, std::span<const Rational> values);
Complex<Rational> specialize(const Complex<Laurent>& x, std::span<const Rational> values);

} // namespace hk
