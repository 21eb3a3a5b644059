#pragma once

#include "homkit/complex.hpp"
#include "homkit/coxeter.hpp"
#include "homkit/report.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace hk::bn {

using cox::CoxGroup;
using cox::Elem;
using cox::GenSet;

/// Element of QG: group-element index -> coefficient.
using GroupAlg = SparseVec<Rational>;

/// Group of invertible n x n matrices over F_q, elements indexed 0..size-1.
class FinGroup {
  public:
    FinGroup(int n, int q, std::vector<std::vector<int>> mats);

    int size() const { return static_cast<int>(mats_.size()); }
    int n() const { return n_; }
    int q() const { return q_; }
    int identity() const { return id_; }
    int mul(int a, int b) const { return mult_[static_cast<std::size_t>(a) * size() + b]; }
    int inv(int a) const { return inv_[a]; }
    const std::vector<int>& matrix(int a) const { return mats_[a]; }
    /// Index of a matrix (row-major entries in 0..q-1), or -1.
    int index_of(const std::vector<int>& m) const;
    std::string to_string(int a) const;

  private:
    int n_, q_, id_ = -1;
    std::vector<std::vector<int>> mats_;
    std::vector<int> code_to_index_, mult_, inv_;
};

/// Sorted element lists of a parabolic subgroup and its pieces.
struct Parabolic {
    std::vector<int> P, U, L;   // P_I = U_I . L_I
    std::vector<int> Pm, Um;    // opposite versions P_I^-, U_I^-
};

/// GL_n or SL_n over F_q (n <= 3, q in {2,3}, |G| <= 1000) with its standard
/// split BN-pair: B upper triangular, U unitriangular, T diagonal, N monomial.
class BNPair {
  public:
    static std::unique_ptr<BNPair> build(const std::string& spec);

    const std::string& name() const { return name_; }
    const FinGroup& group() const { return G_; }
    const CoxGroup& weyl() const { return W_; }
    int p() const { return G_.q(); }
    const std::vector<int>& B() const { return B_; }
    const std::vector<int>& U() const { return U_; }
    const std::vector<int>& T() const { return T_; }
    const std::vector<int>& N() const { return N_; }
    /// The chosen representative of w in N.
    int rep(Elem w) const { return rep_[w]; }
    /// Image in W of an element of N.
    Elem weyl_of(int n) const;
    const Parabolic& parabolic(GenSet I) const { return para_.at(I.bits()); }
    /// e_I = |U_I|^-1 sum of U_I.
    GroupAlg idempotent(GenSet I) const;
    /// A short generating list of a subgroup.
    std::vector<int> generators(const std::vector<int>& subgroup) const;

  private:
    BNPair(std::string name, FinGroup G, CoxGroup W) : name_(std::move(name)), G_(std::move(G)), W_(std::move(W)) {}
    void setup(bool special);

    std::string name_;
    FinGroup G_;
    CoxGroup W_;
    std::vector<int> B_, U_, T_, N_;
    std::vector<int> rep_, weyl_idx_;
    std::vector<Parabolic> para_;
};

/// Group spec strings: "GL2(2)", "SL2(3)", "GL3(2)".
bool is_group_spec(const std::string& spec);

GroupAlg ga_basis(int g, Rational c = 1);
GroupAlg ga_mul(const FinGroup& G, const GroupAlg& x, const GroupAlg& y);
GroupAlg ga_sum(const std::vector<int>& elems, Rational c = 1);

/// Subgroup helpers on sorted element lists.
std::vector<int> closure(const FinGroup& G, const std::vector<int>& gens);
std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b);
bool is_subset(const std::vector<int>& a, const std::vector<int>& b);
/// x^-1 H x.
std::vector<int> conjugate(const FinGroup& G, const std::vector<int>& H, int x);
/// Products {a b}.
std::vector<int> product_set(const FinGroup& G, const std::vector<int>& A, const std::vector<int>& Bs);

/// BN-pair axioms used downstream: Bruhat partition, parabolic decompositions,
/// the opposite parabolics, idempotents.
Report bn_invariants(const BNPair& bn);

/// e_I n e_J = e_{I cap wJ} n e_J = e_I n e_{I^w cap J} = e_{I cap wJ} n e_{I^w cap J} for all
/// I, J, w in D_IJ, with the chosen n and with n t for every t in T.
Report prop10_check(const BNPair& bn);

/// Cosets of a subgroup H: xH (right = false) or Hx (right = true), numbered by
/// their smallest element.
struct CosetIndex {
    std::vector<int> id;   // element -> coset number
    std::vector<int> reps; // smallest element of each coset
    int count() const { return static_cast<int>(reps.size()); }
};
CosetIndex coset_index(const FinGroup& G, const std::vector<int>& H, bool right);

/// St(G): degree |I| holds Z[G/P_I] (plus) or Z[P_I^- \ G] (minus).
struct StModel {
    Assembled<Integer> assembled;
    std::map<std::uint32_t, CosetIndex> cosets;
};
StModel st_model(const BNPair& bn, bool minus, const Order& order);
Complex<Integer> st_complex(const BNPair& bn, bool minus, const Order& order);

} // namespace hk::bn
