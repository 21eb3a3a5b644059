#pragma once

#include "homkit/complex.hpp"
#include "homkit/coxeter.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hk::cosets {

using cox::CoxGroup;
using cox::Elem;
using cox::GenSet;

/// Right coset W_I d, d the minimal-length element.
struct Coset {
    GenSet I;
    Elem d = 0;
    auto operator<=>(const Coset&) const = default;
};

Coset make_coset(const CoxGroup& G, GenSet I, Elem w);
/// W_{J u S(a)} a.
Coset coset_union(const CoxGroup& G, const Coset& a, GenSet J);
inline Coset coset_union(const CoxGroup& G, const Coset& a, int s) { return coset_union(G, a, GenSet::single(s)); }
/// True iff b is contained in a as sets.
bool coset_contains(const CoxGroup& G, const Coset& a, const Coset& b);
/// "{1,3}|s1s2", "{}|e".
std::string coset_label(const CoxGroup& G, const Coset& a);
Coset parse_coset_label(const CoxGroup& G, std::string_view text);

/// Cosets meeting D_{0,I0}, graded by |S(a)|. Holds a reference to the group.
class CosetSystem {
  public:
    CosetSystem(const CoxGroup& G, GenSet i0);

    const CoxGroup& group() const { return *G_; }
    GenSet i0() const { return i0_; }

    /// A(I0), sorted by (|S(a)|, S(a) bits, d).
    const std::vector<Coset>& cosets() const { return cosets_; }
    int size() const { return static_cast<int>(cosets_.size()); }
    const Coset& at(int k) const { return cosets_[k]; }
    /// Index in cosets(), or -1 when the coset is not in A(I0).
    int index_of(const Coset& a) const;
    /// True iff the coset (by index) is not contained in W_{I0}.
    bool plus(int k) const { return plus_[k]; }
    /// Indices of A(I0)+ in cosets() order.
    const std::vector<int>& plus_indices() const { return plus_list_; }

    bool in_a_i0(const Coset& a) const;
    bool in_plus(const Coset& a) const;
    /// The unique element of a meeting D_{S(a),I0}.
    Elem v0(const Coset& a) const { return a.d; }
    /// I0 intersected with v0(a)^-1 S(a) v0(a).
    GenSet i0_of(const Coset& a) const;

    Elem theta_elem(Elem w) const;
    Coset theta(const Coset& a) const;
    /// The generator s_w; requires w in D_{0,I0}, w != w_S w_I0.
    int s_choice(Elem w) const;
    /// Conjugation by w_S on generator indices.
    int conj(int s) const { return conj_[s]; }
    GenSet conj(GenSet I) const;

  private:
    const CoxGroup* G_;
    GenSet i0_;
    std::vector<Coset> cosets_;
    std::vector<char> plus_;
    std::vector<int> plus_list_;
    std::map<Coset, int> index_;
    std::vector<int> conj_;
};

/// Z-span of a list of cosets of A(I0) as a complex, with differential
/// a -> sum over s not in S(a) of (-1)^{n(S(a),s)} (a u s). The list must be
/// closed under a -> a u s. `where` maps each coset index to (degree, offset).
struct CosetComplex {
    Complex<Integer> complex;
    std::vector<int> members;
    std::map<int, std::pair<int, int>> where;
};
CosetComplex coset_span_complex(const CosetSystem& sys, const std::vector<int>& members, const Order& order);

/// Coxeter complex A(W,S) over Z.
Complex<Integer> coxeter_complex(const CoxGroup& G, const Order& order);

/// Contraction of Z A(I0)+ together with its coefficients m(a, b).
struct SigmaCert {
    GenSet i0;
    Order order;        // base order on S
    Order order_conj;   // w_S-conjugated order used on the theta side
    CosetComplex plus;  // Z A(I0)+ with the base order
    std::map<std::pair<int, int>, Integer> m; // (a, b) coset indices: sigma(a) = sum m(a,b) b
    GradedMap<Integer> sigma{-1, {}};
    int iterations = 0; // Neumann series terms used
};

/// Failure of one of the structural checks on tau or sigma.
struct InvariantReport {
    bool ok = true;
    std::vector<std::string> failures;
    void fail(std::string s) {
        ok = false;
        if (failures.size() < 20) failures.push_back(std::move(s));
    }
};

Order conjugated_order(const CosetSystem& sys, const Order& order);

/// tau on the theta side: (sign, target index), sign 0 for zero.
struct TauValue {
    int sign = 0;
    int target = -1;
};
TauValue tau(const CosetSystem& sys, const Order& order_conj, int b);

/// tau^2 = 0, preservation of length and I0-set, and the strict right
/// divisibility refinement of tau d + d tau - Id, on every theta-side basis element.
InvariantReport check_tau(const CosetSystem& sys, const Order& order);

/// Builds and fully verifies sigma; throws VerificationError on failure.
SigmaCert build_sigma(const CosetSystem& sys, const Order& order);
/// Exact re-check of sigma d + d sigma = Id and of the triangularity invariants.
InvariantReport check_sigma(const CosetSystem& sys, const SigmaCert& cert);

} // namespace hk::cosets
