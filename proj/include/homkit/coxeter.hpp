#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hk::cox {

/// Raised for Coxeter types outside the supported list.
class UnsupportedType : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum class Family { A, B, D, I2 };

/// Irreducible finite Coxeter type. Supported: A1-A4, B2-B3, D4, I2(m) for 3 <= m <= 12.
struct CoxType {
    Family family = Family::A;
    int rank = 1;
    int m = 0; // only meaningful for I2

    /// Parses "A3", "B2", "D4", "I2(7)".
    static CoxType parse(std::string_view text);
    std::string name() const;
    bool supported() const;
    bool operator==(const CoxType&) const = default;
};

/// Element of W, identified by its BFS index (identity is 0, indices are
/// nondecreasing in length).
using Elem = int;

/// Subset of the generating set S as a bitmask. Generator s_i (1-based in
/// the Dynkin numbering) is bit i-1.
class GenSet {
  public:
    constexpr GenSet() = default;
    constexpr explicit GenSet(std::uint32_t bits) : bits_(bits) {}

    static constexpr GenSet single(int s) { return GenSet(1u << s); }
    static constexpr GenSet full(int n) { return GenSet((1u << n) - 1u); }

    constexpr std::uint32_t bits() const { return bits_; }
    constexpr bool contains(int s) const { return (bits_ >> s) & 1u; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int size() const { return std::popcount(bits_); }
    constexpr bool subset_of(GenSet o) const { return (bits_ & ~o.bits_) == 0; }
    constexpr GenSet with(int s) const { return GenSet(bits_ | (1u << s)); }
    constexpr GenSet without(int s) const { return GenSet(bits_ & ~(1u << s)); }

    constexpr GenSet operator|(GenSet o) const { return GenSet(bits_ | o.bits_); }
    constexpr GenSet operator&(GenSet o) const { return GenSet(bits_ & o.bits_); }
    constexpr GenSet operator-(GenSet o) const { return GenSet(bits_ & ~o.bits_); }
    constexpr auto operator<=>(const GenSet&) const = default;

    std::vector<int> members() const;
    /// "{1,3}" with 1-based generator names.
    std::string to_string() const;

  private:
    std::uint32_t bits_ = 0;
};

/// All subsets of `universe`, in increasing bitmask order.
std::vector<GenSet> subsets_of(GenSet universe);

enum class Side { left, right };

/// A finite Coxeter group built from a faithful permutation model, with
/// multiplication, inverse and length tables. Immutable after build.
class CoxGroup {
  public:
    static CoxGroup build(const CoxType& type);

    const CoxType& type() const { return type_; }
    int size() const { return static_cast<int>(length_.size()); }
    int rank() const { return rank_; }
    GenSet all() const { return GenSet::full(rank_); }
    Elem identity() const { return 0; }
    Elem gen(int s) const { return gens_[s]; }

    Elem mul(Elem u, Elem v) const { return mult_[static_cast<std::size_t>(u) * size() + v]; }
    Elem inv(Elem w) const { return inv_[w]; }
    int length(Elem w) const { return length_[w]; }
    Elem rmul_gen(Elem w, int s) const { return mul(w, gens_[s]); }
    Elem lmul_gen(int s, Elem w) const { return mul(gens_[s], w); }
    /// Generator index of w, or -1 if w is not a simple reflection.
    int gen_index(Elem w) const { return gen_index_[w]; }

    bool right_descent(Elem w, int s) const { return length(rmul_gen(w, s)) < length(w); }
    bool left_descent(Elem w, int s) const { return length(lmul_gen(s, w)) < length(w); }

    /// Lexicographically least reduced word (0-based generator indices).
    std::vector<int> reduced_word(Elem w) const;
    Elem from_word(const std::vector<int>& word) const;
    /// "e" or "s1s2s1".
    std::string word_string(Elem w) const;
    /// Inverse of word_string; throws std::invalid_argument on bad input.
    Elem parse_word(std::string_view text) const;

    /// Longest element w_I of the parabolic subgroup W_I.
    Elem longest(GenSet I) const { return longest_[I.bits()]; }
    const std::vector<Elem>& parabolic(GenSet I) const { return parabolic_[I.bits()]; }
    bool in_parabolic(Elem w, GenSet I) const;

    struct Split {
        Elem d; // minimal-length coset representative
        Elem u; // element of W_I
    };
    /// side=right: coset W_I w, w = u*d. side=left: coset w W_I, w = d*u.
    Split coset_min_rep(GenSet I, Elem w, Side side) const;

    /// D_{IJ}: minimal representatives of the W_I-W_J double cosets, sorted by (length, index).
    std::vector<Elem> dist_reps(GenSet I, GenSet J) const;
    bool in_dist(Elem w, GenSet I, GenSet J) const;

    /// True iff w2 = w'' * w1 with l(w'') + l(w1) = l(w2).
    bool right_divides(Elem w1, Elem w2) const;

    /// {t in S : w t w^-1 in I}, i.e. I^w intersected with S.
    GenSet conjugate_into(GenSet I, Elem w) const;

    /// Order of s*t.
    int coxeter_m(int s, int t) const;
    /// Index of the W-conjugacy class of each generator (classes numbered by first generator).
    const std::vector<int>& generator_class() const { return gen_class_; }
    int class_count() const;

  private:
    CoxType type_;
    int rank_ = 0;
    std::vector<Elem> gens_;
    std::vector<Elem> mult_;
    std::vector<Elem> inv_;
    std::vector<int> length_;
    std::vector<int> gen_index_;
    std::vector<Elem> longest_;
    std::vector<std::vector<Elem>> parabolic_;
    std::vector<int> gen_class_;
};

} // namespace hk::cox
