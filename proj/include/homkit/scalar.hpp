#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hk {

using Integer = mpz_class;
using Rational = mpq_class;

/// Maximum number of Laurent variables (one per conjugacy class of generators).
inline constexpr int kMaxVars = 2;

struct Monomial {
    std::array<std::int32_t, kMaxVars> exp{};

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        for (int i = 0; i < kMaxVars; ++i) r.exp[i] = exp[i] + o.exp[i];
        return r;
    }
    bool is_one() const {
        for (auto e : exp)
            if (e != 0) return false;
        return true;
    }
    auto operator<=>(const Monomial&) const = default;
};

/// Laurent polynomial in up to kMaxVars variables with int64 coefficients.
/// Terms are kept sorted by monomial with no zero coefficients; arithmetic
/// overflow throws std::overflow_error instead of wrapping.
class Laurent {
  public:
    using Term = std::pair<Monomial, std::int64_t>;

    Laurent() = default;
    Laurent(std::int64_t c) { // NOLINT(google-explicit-constructor): ring embedding of Z
        if (c != 0) terms_.push_back({Monomial{}, c});
    }
    static Laurent monomial(const Monomial& m, std::int64_t c = 1);
    static Laurent var(int i, int power = 1);

    bool is_zero() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }
    std::int64_t coeff(const Monomial& m) const;

    Laurent& operator+=(const Laurent& o);
    Laurent& operator-=(const Laurent& o);
    Laurent& operator*=(const Laurent& o) { return *this = *this * o; }
    friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
    friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
    friend Laurent operator*(const Laurent& a, const Laurent& b);
    friend Laurent operator-(Laurent a);
    friend bool operator==(const Laurent&, const Laurent&) = default;

    /// Substitutes the given nonzero rationals for the variables.
    Rational evaluate(std::span<const Rational> values) const;
    /// Human-readable form, e.g. "q^2 - 3 + q^-1".
    std::string to_string(std::span<const std::string> names) const;

  private:
    explicit Laurent(std::vector<Term> terms) : terms_(std::move(terms)) {}
    static Laurent merge(const Laurent& a, const Laurent& b, bool subtract);

    std::vector<Term> terms_;
};

inline bool is_zero(const Integer& x) { return sgn(x) == 0; }
inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero(const Laurent& x) { return x.is_zero(); }

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

/// Canonical decimal text: "-12", "3/4".
std::string scalar_string(const Integer& x);
std::string scalar_string(const Rational& x);
/// Strict parsers accepting exactly the canonical text forms.
Integer parse_integer(const std::string& text);
Rational parse_rational(const std::string& text);

/// Names the ring tag used in certificates.
template <class R> struct RingName;
template <> struct RingName<Integer> { static constexpr const char* value = "integer"; };
template <> struct RingName<Rational> { static constexpr const char* value = "rational"; };
template <> struct RingName<Laurent> { static constexpr const char* value = "laurent"; };

} // namespace hk
