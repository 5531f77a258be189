#include "susykern/fop.hpp"

namespace susyk::fop {

namespace {

bool has_parity(const GrassmannElement& x, int p) {
    return p == 0 ? x.is_even() : x.is_odd();
}

bool invertible(const GrassmannElement& x) { return !x.body().is_zero(); }

}  // namespace

ProjPointData make_proj_point(int n_gens, std::vector<GrassmannElement> evens,
                              std::vector<GrassmannElement> odds, int pivot) {
    if (pivot < 0 || pivot >= static_cast<int>(evens.size()))
        throw SymError("pivot out of range");
    for (auto& t : evens)
        if (!has_parity(t, 0)) throw SymError("even slot holds an odd element");
    for (auto& th : odds)
        if (!has_parity(th, 1)) throw SymError("odd slot holds an even element");
    if (!invertible(evens[pivot])) throw SymError("pivot entry is not invertible");
    return ProjPointData{n_gens, std::move(evens), std::move(odds), pivot};
}

AffineCoords proj_standard_form(const ProjPointData& p) {
    GrassmannElement inv = grass::ginv(p.evens[p.pivot]);
    AffineCoords c;
    for (int k = 0; k < static_cast<int>(p.evens.size()); ++k)
        if (k != p.pivot) c.evens.push_back(p.evens[k] * inv);
    for (auto& th : p.odds) c.odds.push_back(th * inv);
    return c;
}

ProjPointData affine_to_proj(int n_gens, int i, const AffineCoords& c) {
    std::vector<GrassmannElement> evens;
    int k = 0;
    for (int slot = 0; slot <= static_cast<int>(c.evens.size()); ++slot) {
        if (slot == i)
            evens.push_back(GrassmannElement::scalar(n_gens, Scalar(1)));
        else
            evens.push_back(c.evens[k++]);
    }
    return make_proj_point(n_gens, std::move(evens), c.odds, i);
}

PiPointData make_pi_point(int n_gens, GrassmannElement s0, GrassmannElement sigma0,
                          GrassmannElement s1, GrassmannElement sigma1) {
    if (!has_parity(s0, 0) || !has_parity(s1, 0))
        throw SymError("s slots must be even");
    if (!has_parity(sigma0, 1) || !has_parity(sigma1, 1))
        throw SymError("sigma slots must be odd");
    if (!invertible(s0) && !invertible(s1))
        throw SymError("neither s0 nor s1 is invertible");
    return PiPointData{n_gens, std::move(s0), std::move(sigma0), std::move(s1),
                       std::move(sigma1)};
}

std::pair<GrassmannElement, GrassmannElement> pi_standard_form(const PiPointData& p,
                                                               int chart) {
    const GrassmannElement& s = (chart == 0) ? p.s0 : p.s1;
    const GrassmannElement& sg = (chart == 0) ? p.sigma0 : p.sigma1;
    const GrassmannElement& so = (chart == 0) ? p.s1 : p.s0;
    const GrassmannElement& sgo = (chart == 0) ? p.sigma1 : p.sigma0;
    if (!invertible(s)) throw SymError("standard form pivot is not invertible");
    GrassmannElement inv = grass::ginv(s);
    GrassmannElement inv2 = inv * inv;
    GrassmannElement v = so * inv - sgo * sg * inv2;
    GrassmannElement nu = sgo * inv - so * sg * inv2;
    return {v, nu};
}

bool pi_gluing_check(const GrassmannElement& v0, const GrassmannElement& nu0) {
    if (!invertible(v0)) throw SymError("v0 is not invertible");
    int n = v0.n();
    GrassmannElement one = GrassmannElement::scalar(n, Scalar(1));
    GrassmannElement zero = GrassmannElement::scalar(n, Scalar(0));
    PiPointData p = make_pi_point(n, one, zero, v0, nu0);
    auto [v1, nu1] = pi_standard_form(p, 1);
    GrassmannElement inv = grass::ginv(v0);
    return v1 == inv && nu1 == -(nu0 * inv * inv);
}

Vec4 interleaved_to_block(const Vec4& v) { return Vec4{v[0], v[2], v[1], v[3]}; }
Vec4 block_to_interleaved(const Vec4& v) { return Vec4{v[0], v[2], v[1], v[3]}; }

bool in_span(const RowPair& rows, const Vec4& t) {
    Vec4 r0 = rows.row_even;
    Vec4 r1 = rows.row_odd;
    // pivot for the first row
    int a = -1;
    for (int j = 0; j < 4 && a < 0; ++j)
        if (invertible(r0[j])) a = j;
    if (a < 0) {
        std::swap(r0, r1);
        for (int j = 0; j < 4 && a < 0; ++j)
            if (invertible(r0[j])) a = j;
    }
    if (a < 0) throw SymError("rank-deficient rows: no invertible pivot");
    GrassmannElement inv0 = grass::ginv(r0[a]);
    // clear column a from the second row
    GrassmannElement c = r1[a] * inv0;
    Vec4 r1r;
    for (int j = 0; j < 4; ++j) r1r[j] = r1[j] - c * r0[j];
    int b = -1;
    for (int j = 0; j < 4 && b < 0; ++j)
        if (j != a && invertible(r1r[j])) b = j;
    if (b < 0) throw SymError("rank-deficient rows: second pivot missing");
    // candidate coefficients, verified by substitution
    GrassmannElement x = t[a] * inv0;
    GrassmannElement y = (t[b] - x * r0[b]) * grass::ginv(r1r[b]);
    for (int j = 0; j < 4; ++j) {
        GrassmannElement resid = t[j] - (x * r0[j] + y * r1r[j]);
        if (!resid.is_zero()) return false;
    }
    return true;
}

namespace {

Vec4 phi_interleaved(const Vec4& v) {
    return block_to_interleaved(grass::phi_apply(interleaved_to_block(v)));
}

Vec4 theta_interleaved(const Vec4& v) {
    return block_to_interleaved(grass::right_theta_action(interleaved_to_block(v)));
}

}  // namespace

bool phi_invariance_check(const RowPair& rows) {
    return in_span(rows, phi_interleaved(rows.row_even)) &&
           in_span(rows, phi_interleaved(rows.row_odd));
}

bool right_theta_stability_check(const RowPair& rows) {
    return in_span(rows, theta_interleaved(rows.row_even)) &&
           in_span(rows, theta_interleaved(rows.row_odd));
}

RowPair standard_rows(const PiPointData& p) {
    RowPair r;
    r.n_gens = p.n_gens;
    r.row_even = Vec4{p.s0, p.sigma0, p.s1, p.sigma1};
    r.row_odd = Vec4{p.sigma0, p.s0, p.sigma1, p.s1};
    return r;
}

}  // namespace susyk::fop
