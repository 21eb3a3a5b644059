#pragma once

#include "homkit/bimodule.hpp"
#include "homkit/bnpair.hpp"
#include "homkit/equivalence.hpp"

#include <cstdint>
#include <map>

namespace hk::bn {

/// Q G e_K (x)_{P_K} e_K Q Omega for a subgroup Omega containing P_K. The
/// basis is the set of P_K-orbits of pairs (g U_K, U_K w), w in Omega, under
/// (c p, c') ~ (c, p c'); the orbit of (g U_K, U_K w) stands for g e_K (x) e_K w.
class TModel {
  public:
    TModel(const BNPair& bn, GenSet K, std::vector<int> omega);

    GenSet K() const { return K_; }
    int dim() const { return static_cast<int>(orbit_rep_.size()); }
    const std::vector<int>& omega() const { return omega_; }
    /// (g, w) representing basis element b.
    std::pair<int, int> rep(int b) const { return orbit_rep_[b]; }
    int basis_of(int g, int w) const;
    FreeModule module() const;
    /// Coordinates of x (x) y for x in Q G e_K and y in e_K Q Omega.
    SparseVec<Rational> coords(const GroupAlg& x, const GroupAlg& y) const;
    /// Left multiplication by g in G, right multiplication by h in Omega.
    SparseMatrix<Rational> left_action(int g) const;
    SparseMatrix<Rational> right_action(int h) const;
    /// Dimension of the same tensor product computed as the quotient of
    /// Q[G/U_K] (x)_Q Q[U_K\Omega] by the balancing relations; needs within_guard().
    int quotient_dim() const;
    /// |G/U_K|^2 <= 2500.
    bool within_guard() const;

  private:
    const BNPair* bn_;
    GenSet K_;
    std::vector<int> omega_;
    CosetIndex left_;
    std::vector<int> right_id_, right_reps_; // U_K w -> number, for w in Omega
    std::vector<int> orbit_;                 // pair index -> orbit
    std::vector<std::pair<int, int>> orbit_rep_;
    std::vector<int> pk_gens_;
};

/// X(G): degree |I| holds Q G e_I (x)_{P_I} e_I Q G, with its left and right
/// actions by a generating list of G.
struct XGModel {
    ActedComplex X;
    CoeffSystem<Rational> system;
    std::map<std::uint32_t, TModel> spaces;
    std::map<std::uint32_t, std::pair<int, int>> block;
    std::vector<int> gens;
};
XGModel build_XG(const BNPair& bn, const Order& order);
GradedMap<Rational> xg_action(const XGModel& M, int g, cox::Side side);
/// Orbit dimensions against the balancing quotient (where within the guard),
/// d^2 = 0, actions.
Report xg_checks(const XGModel& M);

/// X(G) e_I0 is homotopy equivalent to Q G e_I0 (x)_{L_I0} X(L_I0); the
/// certificate lives on X(G) e_I0 in the basis of its degreewise subspaces.
struct Thm9Result {
    EquivCert<Rational> cert;
    Report report;
};
Thm9Result theorem9_certificate(const BNPair& bn, GenSet i0, const Order& order);

/// Res St(G) to P_I0 is homotopy equivalent to St(L_I0) (x)_{L_I0} Z P_I0, in the
/// right-module model with bases P_I^- \ G.
struct Thm20Result {
    EquivCert<Integer> cert;
    Report report;
};
Thm20Result theorem20_certificate(const BNPair& bn, GenSet i0, const Order& order);

/// Betti numbers of X(G) (x)_G X(G)^dual, expected |G| in degree 0 only, and
/// the bimodule character of H^0 against that of QG on `pairs` random (g, h).
struct GroupDuality {
    int lo = 0;
    std::vector<int> ranks;
    bool ok = false;
    Report report;
};
GroupDuality group_duality_check(const BNPair& bn, int pairs = 5, unsigned seed = 0);

} // namespace hk::bn
