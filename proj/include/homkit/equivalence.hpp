#pragma once

#include "homkit/complex.hpp"

#include <stdexcept>

namespace hk {

/// Thrown when an exact identity that should hold does not.
class VerificationError : public std::runtime_error {
  public:
    explicit VerificationError(const Check& c) : std::runtime_error(c.describe()), check_(c) {}
    const Check& check() const { return check_; }

  private:
    Check check_;
};

inline void require(const Check& c, const std::string& context) {
    if (!c) {
        Check tagged = c;
        tagged.what = context + ": " + c.what;
        throw VerificationError(tagged);
    }
}

/// Kernel subcomplex Z of p: Y -> Y' with inclusion, a retraction and a contraction of Z.
template <class R> struct Kernel {
    Complex<R> Z;
    GradedMap<R> incl{0, {}};    // Z -> Y
    GradedMap<R> retract{0, {}}; // Y -> Z, retract o incl = Id
    GradedMap<R> sigma{-1, {}};  // contraction of Z
};

/// Homotopy equivalence data: p: Y -> Y', g: Y' -> Y, k on Y of degree -1.
template <class R> struct EquivCert {
    Complex<R> Y, Yp;
    GradedMap<R> p{0, {}}, g{0, {}}, k{-1, {}};
};

namespace detail {
template <class R> Check check_identity(const GradedMap<R>& lhs, const GradedMap<R>& rhs, const Complex<R>& x,
                                        const Complex<R>& y, const char* what) {
    for (int deg = x.lo; deg <= x.hi(); ++deg) {
        auto diff = lhs.at(deg, x, y) - rhs.at(deg, x, y);
        if (!diff.is_zero()) return fail_at(what, x, deg, diff);
    }
    return Check::pass();
}

/// Graded map x -> y of degree +1 given by the differentials: d_y f - f d_x for f of degree 0.
template <class R>
GradedMap<R> commutator(const GradedMap<R>& f, const Complex<R>& x, const Complex<R>& y) {
    GradedMap<R> out{f.shift + 1, {}};
    for (int deg = x.lo; deg <= x.hi(); ++deg) {
        auto m = y.d(deg + f.shift) * f.at(deg, x, y) - f.at(deg + 1, x, y) * x.d(deg);
        if (!m.is_zero()) out.blocks[deg] = std::move(m);
    }
    return out;
}

/// d k + k d for k of degree -1 on x.
template <class R> GradedMap<R> homotopy_boundary(const GradedMap<R>& k, const Complex<R>& x) {
    GradedMap<R> out{0, {}};
    for (int deg = x.lo; deg <= x.hi(); ++deg) {
        auto m = x.d(deg - 1) * k.at(deg, x, x) + k.at(deg + 1, x, x) * x.d(deg);
        if (!m.is_zero()) out.blocks[deg] = std::move(m);
    }
    return out;
}
} // namespace detail

/// Checks the three defining identities plus that Y, Y' are complexes and p, g chain maps.
template <class R> Check verify_equivalence(const EquivCert<R>& c) {
    if (auto r = verify_complex(c.Y); !r) return r;
    if (auto r = verify_complex(c.Yp); !r) return r;
    if (c.p.shift != 0 || c.g.shift != 0 || c.k.shift != -1) return Check::fail("equivalence maps have wrong degrees");
    if (auto r = verify_chain_map(c.p, c.Y, c.Yp); !r) return Check::fail("p is not a chain map: " + r.what, r.degree, r.basis, r.label);
    if (auto r = verify_chain_map(c.g, c.Yp, c.Y); !r) return Check::fail("g is not a chain map: " + r.what, r.degree, r.basis, r.label);
    auto pg = compose(c.p, c.g, c.Yp, c.Y, c.Yp);
    if (auto r = detail::check_identity(pg, identity_map(c.Yp), c.Yp, c.Yp, "p g != Id"); !r) return r;
    auto lhs = combine(identity_map(c.Y), compose(c.g, c.p, c.Y, c.Yp, c.Y), -1, c.Y, c.Y);
    auto rhs = detail::homotopy_boundary(c.k, c.Y);
    if (auto r = detail::check_identity(lhs, rhs, c.Y, c.Y, "Id - g p != d k + k d"); !r) return r;
    return Check::pass();
}

/// Builds the homotopy inverse g of a degreewise split surjection p with
/// contractible kernel, together with the homotopy k. The section s need not
/// be a chain map. Every input property and output identity is checked exactly.
template <class R>
EquivCert<R> split_equivalence(const Complex<R>& Y, const Complex<R>& Yp, const GradedMap<R>& p,
                               const GradedMap<R>& s, const Kernel<R>& ker) {
    for (int deg = Y.lo; deg <= Y.hi(); ++deg)
        if (Yp.dim(deg) > Y.dim(deg)) throw VerificationError(Check::fail("p not surjective", deg));
    for (int deg = Yp.lo; deg <= Yp.hi(); ++deg)
        if (!Y.in_range(deg) && Yp.dim(deg) > 0) throw VerificationError(Check::fail("p not surjective", deg));
    require(verify_complex(Y), "Y");
    require(verify_complex(Yp), "Y'");
    require(verify_chain_map(p, Y, Yp), "p");
    const auto& Z = ker.Z;
    auto ps = compose(p, s, Yp, Y, Yp);
    require(detail::check_identity(ps, identity_map(Yp), Yp, Yp, "p s != Id"), "section");
    require(verify_complex(Z), "kernel");
    require(verify_chain_map(ker.incl, Z, Y), "kernel inclusion");
    require(detail::check_identity(compose(ker.retract, ker.incl, Z, Y, Z), identity_map(Z), Z, Z, "r i != Id"),
            "kernel retraction");
    require(detail::check_identity(compose(p, ker.incl, Z, Y, Yp), GradedMap<R>{0, {}}, Z, Yp, "p i != 0"),
            "kernel inclusion");
    auto proj = combine(identity_map(Y), compose(s, p, Y, Yp, Y), -1, Y, Y); // Id - s p
    auto through = compose(ker.incl, compose(ker.retract, proj, Y, Y, Z), Y, Z, Y);
    require(detail::check_identity(through, proj, Y, Y, "kernel of p not inside the image of i"), "kernel");
    require(verify_contraction(Z, ker.sigma), "kernel contraction");

    EquivCert<R> out;
    out.Y = Y;
    out.Yp = Yp;
    out.p = p;
    auto D = detail::commutator(s, Yp, Y);                  // d s - s d, degree +1
    auto DZ = compose(ker.retract, D, Yp, Y, Z);            // lands in Z
    auto corr = compose(ker.incl, compose(ker.sigma, DZ, Yp, Z, Z), Yp, Z, Y);
    out.g = combine(s, corr, -1, Yp, Y);
    auto q = compose(ker.retract, combine(identity_map(Y), compose(out.g, p, Y, Yp, Y), -1, Y, Y), Y, Y, Z);
    out.k = compose(ker.incl, compose(ker.sigma, q, Y, Z, Z), Y, Z, Y);
    require(verify_equivalence(out), "split equivalence");
    return out;
}

} // namespace hk
