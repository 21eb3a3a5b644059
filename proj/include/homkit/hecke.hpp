#pragma once

#include "homkit/complex.hpp"
#include "homkit/cosets.hpp"
#include "homkit/coxeter.hpp"
#include "homkit/equivalence.hpp"
#include "homkit/report.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace hk::hecke {

using cox::CoxGroup;
using cox::Elem;
using cox::GenSet;

/// Sparse combination of the h_w, indexed by group element.
using HeckeElem = SparseVec<Laurent>;

/// Hecke algebra parameters: one Laurent variable per conjugacy class of generators.
class HParams {
  public:
    explicit HParams(const CoxGroup& G);

    const CoxGroup& group() const { return *G_; }
    int var_of(int s) const { return var_[s]; }
    const std::vector<std::string>& names() const { return names_; }
    int nvars() const { return static_cast<int>(names_.size()); }
    const Laurent& q(int s) const { return q_[s]; }
    /// Parses "2" or "2,3" into one rational per variable.
    std::vector<Rational> parse_values(const std::string& text) const;

  private:
    const CoxGroup* G_;
    std::vector<int> var_;
    std::vector<std::string> names_;
    std::vector<Laurent> q_;
};

HeckeElem h_basis(Elem w, Laurent c = 1);
HeckeElem h_add(const HeckeElem& a, const HeckeElem& b, const Laurent& c = 1); // a + c b
HeckeElem h_scale(const Laurent& c, const HeckeElem& a);
/// x h_s.
HeckeElem h_rmul_gen(const HParams& P, const HeckeElem& x, int s);
/// h_s x.
HeckeElem h_lmul_gen(const HParams& P, int s, const HeckeElem& x);
/// x multiplied on the right by the generators of `word` in turn.
HeckeElem h_rmul_word(const HParams& P, HeckeElem x, const std::vector<int>& word);
HeckeElem h_mul(const HParams& P, const HeckeElem& x, const HeckeElem& y);
/// (h_w)^-1, via h_s^-1 = q_s^-1 h_s - (1 - q_s^-1) h_e along a reversed reduced word.
HeckeElem h_inv(const HParams& P, Elem w);
/// The automorphism h_s -> -q_s h_s^-1 = -h_s + (q_s - 1).
HeckeElem alpha(const HParams& P, const HeckeElem& x);
/// Quadratic and braid relations for the images alpha(h_s), and alpha^2(h_s) = h_s.
Report check_alpha(const HParams& P);
std::string h_to_string(const HParams& P, const HeckeElem& x);

/// Basis {h_d (x) h_w} of H (x)_{H_K} H', d in D_{0,K}, w in `right` (all of W,
/// or a parabolic W_{I0} containing W_K).
class TensorSpace {
  public:
    TensorSpace(const CoxGroup& G, GenSet K, GenSet right);

    GenSet level() const { return K_; }
    GenSet right_set() const { return right_; }
    int dim() const { return static_cast<int>(left_.size() * rights_.size()); }
    const std::vector<Elem>& left_reps() const { return left_; }
    const std::vector<Elem>& right_elems() const { return rights_; }
    int index(Elem d, Elem w) const;
    std::pair<Elem, Elem> at(int i) const {
        return {left_[i / rights_.size()], rights_[i % rights_.size()]};
    }
    FreeModule module() const;

  private:
    const CoxGroup* G_;
    GenSet K_, right_;
    std::vector<Elem> left_, rights_;
    std::vector<int> lpos_, rpos_;
};

/// x (x)_{H_K} y in the normal form of `T`. Throws if the result leaves T's right support.
SparseVec<Laurent> tensor_normalize(const HParams& P, const TensorSpace& T, const HeckeElem& x, const HeckeElem& y);

/// h (x) h' -> x h (x) h' y on the whole of T.
SparseMatrix<Laurent> tensor_action(const HParams& P, const TensorSpace& T, const HeckeElem& x, const HeckeElem& y);

/// Coefficient system K -> H (x)_{H_K} H_{right} on the subsets of `universe`.
CoeffSystem<Laurent> tensor_system(const HParams& P, GenSet universe, GenSet right);

/// X(H) with its tensor spaces.
struct XHModel {
    Complex<Laurent> X;
    std::map<std::uint32_t, TensorSpace> spaces;
    std::map<std::uint32_t, std::pair<int, int>> block; // subset -> (degree, offset)
};
XHModel build_XH(const HParams& P, const Order& order);
/// Left (side=left) or right multiplication by x on every degree of X(H).
GradedMap<Laurent> xh_action(const HParams& P, const XHModel& M, const HeckeElem& x, cox::Side side);

/// xi = sum_w (-1)^{l(w)} h_w (x) h_w^-1, as a vector of X(H)^0.
SparseVec<Laurent> xi(const HParams& P, const XHModel& M);

Report remark18_suite(const HParams& P, const std::vector<std::vector<Rational>>& specializations);

/// Certificate that X(H) restricted to H (x) H_{I0}^op is homotopy equivalent
/// to H (x)_{H_{I0}} X(H_{I0}), plus equivariance and isomorphism checks.
struct Thm17Result {
    EquivCert<Laurent> cert; // on X(H) itself
    Report report;
};
Thm17Result theorem17_certificate(const HParams& P, GenSet i0, const Order& order);

/// X(H) (x)_H X(H)^dual at a specialization: Betti numbers by degree, expected |W| in degree 0 only.
struct DualityResult {
    int lo = 0;
    std::vector<int> ranks;
    bool ok = false;
};
DualityResult duality_homology_check(const HParams& P, std::span<const Rational> values);

} // namespace hk::hecke
