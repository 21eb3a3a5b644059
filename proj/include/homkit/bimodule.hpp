#pragma once

#include "homkit/complex.hpp"
#include "homkit/report.hpp"

#include <utility>
#include <vector>

namespace hk {

/// Complex of bimodules over Q given by the action of a list of algebra
/// generators on each side (degree-0 graded maps, one per generator).
struct ActedComplex {
    Complex<Rational> X;
    std::vector<GradedMap<Rational>> left, right;
};

/// Chain-map property of every action and commutation of left with right.
Report check_actions(const ActedComplex& x);

/// Linear dual: degree -n holds the dual of X^n, the differential is the
/// transpose, negated when n is odd; (a f b)(x) = f(b x a).
ActedComplex dual_complex(const ActedComplex& x);

/// x (x)_A y over the algebra generated by the action lists (x's right
/// actions are paired with y's left actions), as an explicit quotient of
/// x (x)_Q y by the balancing relations. Each pair (f, h) in `induced`
/// (degree-0 maps of x and y compatible with the balancing) yields f (x) h on
/// the result, written to `maps`.
Complex<Rational> tensor_over(const ActedComplex& x, const ActedComplex& y,
                              const std::vector<std::pair<GradedMap<Rational>, GradedMap<Rational>>>& induced = {},
                              std::vector<GradedMap<Rational>>* maps = nullptr);

} // namespace hk
