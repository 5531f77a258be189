#pragma once

#include "susykern/scalar.hpp"

#include <array>
#include <complex>
#include <vector>

namespace susyk::ell {

using cx = std::complex<double>;

/// Fixed lattice Z + tau Z with cached invariants. Lattice sums are truncated
/// at |w| <= R and corrected by the Laurent tail (even power sums of the
/// excluded lattice points, reduced to the full Eisenstein values); g2, g3 are
/// computed from exponentially convergent row-accelerated Eisenstein sums.
class EllipticContext {
public:
    explicit EllipticContext(cx tau, double radius = 30.0, double eps = 1e-9);

    cx tau() const { return tau_; }
    double radius() const { return radius_; }
    double eps() const { return eps_; }

    cx g2() const { return g2_; }
    cx g3() const { return g3_; }
    cx e1() const { return e1_; }
    cx e2() const { return e2_; }
    cx e3() const { return e3_; }

    /// Half-periods 1/2, tau/2, (1+tau)/2.
    cx omega(int i) const;

    const std::vector<cx>& lattice() const { return pts_; }
    /// Tail power sums T_k = sum_{|w|>R} w^{-k} for k = 4, 6, 8, 10.
    std::array<cx, 4> tails() const { return tails_; }

    /// Distance from z to the nearest lattice point.
    double lattice_distance(cx z) const;

private:
    cx tau_;
    double radius_;
    double eps_;
    std::vector<cx> pts_;  // nonzero lattice points with |w| <= R
    std::array<cx, 4> tails_{};
    cx g2_{}, g3_{}, e1_{}, e2_{}, e3_{};
};

/// Weierstrass elliptic function: truncated sum 1/z^2 + sum' [(z-w)^-2 - w^-2]
/// plus the even Laurent tail corrections. Throws within 1e-6 of a pole.
cx wp(cx z, const EllipticContext& ctx);
cx wp_prime(cx z, const EllipticContext& ctx);

struct Invariants {
    cx g2, g3, e1, e2, e3;
};
Invariants invariants(const EllipticContext& ctx);

/// Branch of sqrt(wp - e1) continued along the straight path from the base
/// point z* = 0.25 + 0.25 tau; steps may be raised to cross-check the path.
cx wp1(cx z, const EllipticContext& ctx, int steps = 64);
/// wp' / (2 wp1) on the same branch.
cx wp1_prime(cx z, const EllipticContext& ctx, int steps = 64);

/// Laurent polynomial oracle: z^-2 + sum_{k>=2} c_k z^{2k-2} with c_2 =
/// g2/20, c_3 = g3/28 and the standard recursion for higher k.
cx wp_laurent(cx z, const EllipticContext& ctx, int terms = 6);

/// Six projective coordinates over C[zeta]/(zeta^2):
/// [wp, wp', 1, wp1 zeta, wp1' zeta, wp1 wp zeta].
struct EmbeddingPoint {
    std::array<cx, 3> x;   // even coordinates
    std::array<cx, 3> xi;  // odd coordinates (coefficients of zeta)
};

EmbeddingPoint embed(cx z, const EllipticContext& ctx);

/// Residuals of the affine chart equations at z:
///  [0] wp'^2 - (4 wp^3 - g2 wp - g3)
///  [1] 2 (wp - e1) wp1' - wp' wp1
///  [2] wp' wp1' - 2 (wp - e2)(wp - e3) wp1
///  [3] wp1 wp - wp wp1 (identically zero by construction)
std::array<double, 4> verify_affine_ideal(cx z, const EllipticContext& ctx);

/// Residuals of the homogeneous equations at an embedding point (invariant
/// under rescaling):
///  [0] x1^2 x2 - (4 x0^3 - g2 x0 x2^2 - g3 x2^3)
///  [1] 2 (x0 x2 - e1 x2^2) xi2 - x1 x2 xi1
///  [2] x1 x2 xi2 - 2 (x0 - e2 x2)(x0 - e3 x2) xi1
///  [3] xi3 x2 - x0 xi1
std::array<double, 4> verify_homogeneous_ideal(const EmbeddingPoint& p,
                                               const EllipticContext& ctx);

/// Least-squares fit of the alternate cubic y^2 = 4x^3 - a1 x^2 - a2 over the
/// given samples; reported, never asserted.
struct AlternateCubicFit {
    cx a1, a2;
    double max_residual = 0.0;
};
AlternateCubicFit fit_alternate_cubic(const EllipticContext& ctx, const std::vector<cx>& zs);

/// Deterministic sample points in the fundamental cell, at fractional distance
/// >= 0.15 from lattice points and half-periods.
std::vector<cx> sample_points(const EllipticContext& ctx, int count, unsigned long long seed);

}  // namespace susyk::ell
