#pragma once

#include "susykern/superfn.hpp"

#include <complex>
#include <optional>
#include <string>

namespace susyk::susy {

/// The standard 1|1 chart with coordinates (z, zeta).
const sfn::ChartSpec& standard_chart();

/// The generator V = d/dzeta + zeta d/dz of the standard structure.
sfn::SuperVectorField standard_generator();

/// The dual form omega = dz - zeta dzeta; pair(omega, V) = 0.
sfn::SuperOneForm susy_omega();

struct FrameReport {
    bool ok = false;
    std::string witness;  // failing factor when not ok
};

/// Frame condition for an odd field D = f d/dzeta + g zeta d/dz on a 1|1
/// chart: D and D^2 = [D,D]/2 span iff f*g (the d/dz coefficient of D^2) is a
/// unit.
FrameReport is_susy(const sfn::SuperVectorField& D);

struct CanonicalCoordinates {
    /// Morphism to the target chart (w, eta) in which D becomes
    /// d/deta + eta d/dw.
    sfn::ChartMorphism F;
    /// D(F*(w)) - F*(eta) and D(F*(eta)) - 1; both must vanish.
    sfn::SuperFunction residual_w;
    sfn::SuperFunction residual_eta;
    /// False when the even change of coordinates is nonlinear, hence only a
    /// local biholomorphism.
    bool global = true;
};

/// Solves h = 1/f, w' = h/g, eta = h zeta for D = f d/dzeta + g zeta d/dz.
/// Throws when the frame condition fails or w' has no antiderivative in the
/// supported class.
CanonicalCoordinates canonical_coordinates(const sfn::SuperVectorField& D,
                                           const std::string& w_name = "w",
                                           const std::string& eta_name = "eta");

/// Candidate automorphism (z, zeta) -> (f(z), g(z) zeta) of the standard
/// chart.
struct SusyAutoCandidate {
    sym::Expr f;
    sym::Expr g;
};

sfn::ChartMorphism candidate_morphism(const SusyAutoCandidate& c);

/// Returns the factor t with F*(omega) = t omega iff t = f' and t = g^2 both
/// hold (checked independently); nullopt otherwise.
std::optional<sym::Expr> is_susy_automorphism(const SusyAutoCandidate& c);

struct ClassifiedAuto {
    Scalar a;
    Scalar b;
    int sign = +1;  // g = sign * sqrt(a)
};

/// For polynomial f, g of degree <= 5: passes iff the candidate is a SUSY
/// automorphism with invertible reduced part, which forces f = a z + b and
/// g = +-sqrt(a).
std::optional<ClassifiedAuto> classify_c11_automorphism(const SusyAutoCandidate& c);

/// Lattice generators A = (z+1, sA zeta), B = (z+tau, sB zeta); both have
/// t = 1 and they commute exactly.
std::pair<SusyAutoCandidate, SusyAutoCandidate> elliptic_action_generators(const Scalar& tau,
                                                                           int s_a, int s_b);

struct FundamentalDomainResult {
    std::complex<double> tau;
    // gamma = [[a, b], [c, d]] in SL2(Z) with tau' = (a tau + b) / (c tau + d)
    long a = 1, b = 0, c = 0, d = 1;
};

/// Standard T/S reduction into |Re| <= 1/2, |tau| >= 1, with deterministic
/// boundary representatives: Re <= 0 on |tau| = 1 and Re = -1/2 on the
/// vertical walls.
FundamentalDomainResult reduce_to_fundamental_domain(std::complex<double> tau);

}  // namespace susyk::susy
