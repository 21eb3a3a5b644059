#pragma once

#include "homkit/certificate.hpp"
#include "homkit/cosets.hpp"

#include <string>

namespace hk::cert {

/// Context recorded alongside an equivalence certificate.
struct EquivMeta {
    std::string pipeline; // e.g. "hecke-thm17"
    std::string algebra;  // "hecke" or "group"
    std::string group;
    cox::GenSet i0;
    Order order;
    Names names;
};

/// Contraction certificate of Z A(I0)+, with the m-coefficients keyed by coset labels.
json sigma_certificate(const cosets::CosetSystem& sys, const cosets::SigmaCert& c);

json equivalence_certificate(const EquivCert<Integer>& c, const EquivMeta& meta);
json equivalence_certificate(const EquivCert<Rational>& c, const EquivMeta& meta);
json equivalence_certificate(const EquivCert<Laurent>& c, const EquivMeta& meta);

struct Verdict {
    bool ok = true;
    std::string message; // first failure, naming the basis element when there is one
};

/// Re-checks a serialized certificate. Contractions are re-derived from the
/// group and the coset labels alone: the basis, the differential, the
/// contraction identity and the triangularity invariants of the m-coefficients.
/// Equivalences are re-checked from their matrices: d^2 = 0, chain maps,
/// pg = Id, Id - gp = dk + kd, pk = 0 and kg = 0. Malformed input is a failure.
Verdict verify_certificate(const json& j);

/// Copy of j with one stored scalar (a matrix entry or an m-coefficient,
/// chosen by rng_index modulo their number) increased by one.
json perturb_one(const json& j, std::size_t rng_index);
std::size_t perturbable_entries(const json& j);

struct FuzzResult {
    int trials = 0;
    int rejected = 0;
    std::string first_survivor; // description of an accepted perturbation
};
FuzzResult fuzz(const json& j, int trials, unsigned seed);

} // namespace hk::cert
