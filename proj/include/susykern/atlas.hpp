#pragma once

#include "susykern/superfn.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace susyk::atl {

/// Named chart of an atlas.
struct Chart {
    std::string name;
    sfn::ChartSpec spec;
};

/// Charts glued by transition morphisms. transitions[(i,j)] is the morphism
/// from chart i (source) into chart j (target), restricted to the overlap; it
/// is stored as pullback data for the target coordinates. Overlap domains are
/// symbolic invertibility constraints, not point sets.
struct Atlas {
    std::vector<Chart> charts;
    std::map<std::pair<int, int>, sfn::ChartMorphism> transitions;
    std::map<std::pair<int, int>, std::string> overlap_constraints;

    int chart_index(const std::string& name) const;  // -1 if absent
};

/// Result of checking the gluing identities. On failure `where` names the
/// offending pair or triple and `residual` is a nonzero coefficient left over
/// after normalization.
struct CocycleReport {
    bool pass = true;
    std::string where;
    std::string residual;
};

/// Checks phi_ii = id where present, phi_ji o phi_ij = id on every overlap,
/// and the triple condition compose(phi_jk, phi_ij) = phi_ik.
CocycleReport verify_cocycle(const Atlas& a);

/// Standard m+1 chart atlas of P^{m|n}: chart i carries evens u0..um (ui
/// omitted) and odds xi1..xin; the transition into chart j divides every
/// coordinate by uj and puts 1/uj in slot i.
Atlas build_projective_atlas(int m, int n);

/// Two 1|1 charts glued by (u, xi) -> (1/u, -xi/u^2); the gluing is an
/// involution.
Atlas build_pi_line_atlas();

/// Line bundle presented as a transition cocycle over a one-even-coordinate
/// cover: g[(i,j)] is an Expr in vars[i], the even coordinate of chart i.
struct LineBundleCocycle {
    std::vector<std::string> chart_names;
    std::vector<std::string> vars;
    std::map<std::pair<int, int>, sym::Expr> g;
};

/// g_ii = 1, g_ij g_ji = 1 (after moving to a common chart), triples multiply
/// to 1.
CocycleReport verify_line_cocycle(const LineBundleCocycle& l, const Atlas& base);

/// Cotangent cocycle f'_ij of a reduced (all charts 1|0, one even coordinate)
/// atlas.
LineBundleCocycle canonical_cocycle(const Atlas& a);

/// For a 1|1 atlas whose odd transitions are linear, eta = g(z) zeta, extracts
/// the cocycle g.
LineBundleCocycle odd_part_cocycle(const Atlas& a);

LineBundleCocycle cocycle_product(const LineBundleCocycle& a, const LineBundleCocycle& b);
LineBundleCocycle cocycle_square(const LineBundleCocycle& l);

/// Square roots of a Laurent-monomial cocycle c*u^d on the standard two-chart
/// cover: both roots +-sqrt(c) u^{d/2} when d is even, absent when d is odd.
std::optional<std::pair<LineBundleCocycle, LineBundleCocycle>> cocycle_sqrt(
    const LineBundleCocycle& l);

/// Degree of a monomial cocycle c*u^d read in chart 0's coordinate; the
/// convention is pinned by deg(-1/u^2) = -2 for the cotangent cocycle of the
/// standard two-chart cover.
int degree(const LineBundleCocycle& l);

/// Square root of the cotangent cocycle: a cocycle L together with the base
/// atlas it lives on; g_ij^2 = f'_ij holds exactly on every overlap.
struct ThetaCharacteristic {
    Atlas base;
    LineBundleCocycle L;
};

/// Validates g^2 = f' on every overlap and packages the result.
ThetaCharacteristic make_theta(Atlas base, LineBundleCocycle L);

/// 1|1 atlas with the even transitions of the base and odd transitions
/// xi -> g_ij(z) xi; passes verify_cocycle and its odd part is L again.
Atlas build_supermanifold_from_theta(const ThetaCharacteristic& theta,
                                     const std::string& odd_name = "xi");

// -- serialization -------------------------------------------------------------

std::string atlas_to_json(const Atlas& a);
Atlas atlas_from_json(const std::string& text);

}  // namespace susyk::atl
