#pragma once

#include "susykern/grassmann.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace susyk::fop {

using grass::DNumber;
using grass::GrassmannElement;
using grass::Vec4;

/// Projective point data over a test ring Lambda_N: even tuple t_0..t_m, odd
/// tuple theta_1..theta_n, and a distinguished index with invertible t_i.
struct ProjPointData {
    int n_gens = 0;
    std::vector<GrassmannElement> evens;
    std::vector<GrassmannElement> odds;
    int pivot = 0;
};

/// Validates parities and invertibility of the pivot entry.
ProjPointData make_proj_point(int n_gens, std::vector<GrassmannElement> evens,
                              std::vector<GrassmannElement> odds, int pivot);

struct AffineCoords {
    std::vector<GrassmannElement> evens;  // t_k / t_i, k != i, in order
    std::vector<GrassmannElement> odds;   // theta_l / t_i
};

/// Divides through by the pivot entry; invariant under rescaling the tuple by
/// a unit.
AffineCoords proj_standard_form(const ProjPointData& p);

/// Inserts 1 at slot i; left inverse of proj_standard_form.
ProjPointData affine_to_proj(int n_gens, int i, const AffineCoords& c);

/// Point data for the two-chart 1|1 line: quadruple (s0, sigma0, s1, sigma1)
/// with the s's even and the sigma's odd.
struct PiPointData {
    int n_gens = 0;
    GrassmannElement s0, sigma0, s1, sigma1;
};

PiPointData make_pi_point(int n_gens, GrassmannElement s0, GrassmannElement sigma0,
                          GrassmannElement s1, GrassmannElement sigma1);

/// Chart 0: v0 = s1 s0^-1 - sigma1 sigma0 s0^-2, nu0 = sigma1 s0^-1 - s1 sigma0 s0^-2.
/// Chart 1: v1 = s0 s1^-1 - sigma0 sigma1 s1^-2, nu1 = sigma0 s1^-1 - s0 sigma1 s1^-2.
std::pair<GrassmannElement, GrassmannElement> pi_standard_form(const PiPointData& p, int chart);

/// Checks (1, 0, v0, nu0) ~ (1/v0, -nu0/v0^2, 1, 0): the chart-1 standard form
/// of the chart-0 normalized quadruple reproduces the gluing map exactly.
bool pi_gluing_check(const GrassmannElement& v0, const GrassmannElement& nu0);

/// Two 4-vectors in interleaved slot order (even, odd, even, odd
/// for an even row); row_even has parity pattern (0,1,0,1), row_odd (1,0,1,0).
struct RowPair {
    int n_gens = 0;
    Vec4 row_even;
    Vec4 row_odd;
};

/// Interleaved (a0, b0, a1, b1) <-> block (a0, a1, b0, b1) slot order used by
/// the phi / right-theta helpers.
Vec4 interleaved_to_block(const Vec4& v);
Vec4 block_to_interleaved(const Vec4& v);

/// Membership of t in the left span of the two rows, solved by elimination
/// that pivots only on invertible (unit-body) entries; throws when the rows
/// are rank deficient.
bool in_span(const RowPair& rows, const Vec4& t);

/// True iff the swap involution phi maps the span of the rows into itself.
bool phi_invariance_check(const RowPair& rows);

/// True iff the span is stable under the right theta action; agrees with
/// phi_invariance_check.
bool right_theta_stability_check(const RowPair& rows);

/// The spanning pair e = (s0, sigma0, s1, sigma1), E = (sigma0, s0,
/// sigma1, s1) attached to a point of the 1|1 line.
RowPair standard_rows(const PiPointData& p);

}  // namespace susyk::fop
