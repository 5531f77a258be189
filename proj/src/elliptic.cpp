#include "susykern/elliptic.hpp"

#include "susykern/rng.hpp"

#include <algorithm>
#include <cmath>

namespace susyk::ell {

namespace {

constexpr long double kPi = 3.14159265358979323846264338327950288L;

using lcx = std::complex<long double>;

lcx widen(cx v) { return lcx(v.real(), v.imag()); }

cx narrow(lcx v) {
    return cx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
}

/// sigma_k(n) = sum of k-th powers of divisors.
long double sigma(int k, int n) {
    long double s = 0;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) s += std::pow(static_cast<long double>(d), k);
    return s;
}

}  // namespace

EllipticContext::EllipticContext(cx tau, double radius, double eps)
    : tau_(tau), radius_(radius), eps_(eps) {
    if (!(tau.imag() > 0)) throw SymError("tau must have positive imaginary part");

    // lattice points 0 < |m + n tau| <= R
    int nmax = static_cast<int>(radius / tau.imag()) + 2;
    for (int n = -nmax; n <= nmax; ++n) {
        double shift = n * tau.real();
        int mmax = static_cast<int>(radius + std::abs(shift)) + 2;
        for (int m = -mmax; m <= mmax; ++m) {
            if (m == 0 && n == 0) continue;
            cx w = static_cast<double>(m) + static_cast<double>(n) * tau;
            if (std::abs(w) <= radius) pts_.push_back(w);
        }
    }

    // Eisenstein values by the row-accelerated (q-)series: exponentially
    // convergent since |q| = exp(-2 pi Im tau) < 1. Extended precision
    // throughout: the tails below are tiny differences of O(1) sums, and the
    // residual checks amplify any error by ~12 wp^2.
    lcx q = std::exp(lcx(0, 2 * kPi) * widen(tau));
    lcx s3 = 0, s5 = 0, qn = 1;
    for (int n = 1; n <= 300; ++n) {
        qn *= q;
        if (std::abs(qn) < 1e-22L) break;
        s3 += sigma(3, n) * qn;
        s5 += sigma(5, n) * qn;
    }
    long double p4 = std::pow(kPi, 4), p6 = std::pow(kPi, 6);
    lcx g2l = (4.0L * p4 / 3.0L) * (1.0L + 240.0L * s3);
    lcx g3l = (8.0L * p6 / 27.0L) * (1.0L - 504.0L * s5);
    g2_ = narrow(g2l);
    g3_ = narrow(g3l);

    // tail power sums T_k = S_k(full) - S_k(disk); the full values reduce to
    // g2, g3 via S4 = g2/60, S6 = g3/140, S8 = (3/7) S4^2, S10 = (5/11) S4 S6
    lcx s4_full = g2l / 60.0L, s6_full = g3l / 140.0L;
    lcx s8_full = (3.0L / 7.0L) * s4_full * s4_full;
    lcx s10_full = (5.0L / 11.0L) * s4_full * s6_full;
    lcx s4 = 0, s6 = 0, s8 = 0, s10 = 0;
    for (cx w : pts_) {
        lcx wl = widen(w);
        lcx w2 = wl * wl;
        lcx w4 = w2 * w2;
        s4 += 1.0L / w4;
        s6 += 1.0L / (w4 * w2);
        s8 += 1.0L / (w4 * w4);
        s10 += 1.0L / (w4 * w4 * w2);
    }
    tails_ = {narrow(s4_full - s4), narrow(s6_full - s6), narrow(s8_full - s8),
              narrow(s10_full - s10)};

    e1_ = wp(omega(1), *this);
    e2_ = wp(omega(2), *this);
    e3_ = wp(omega(3), *this);
}

cx EllipticContext::omega(int i) const {
    switch (i) {
        case 1: return cx(0.5, 0);
        case 2: return tau_ / 2.0;
        case 3: return (1.0 + tau_) / 2.0;
        default: throw SymError("half-period index must be 1, 2 or 3");
    }
}

double EllipticContext::lattice_distance(cx z) const {
    // reduce to fractional coordinates z = a + b tau
    double b = z.imag() / tau_.imag();
    double a = z.real() - b * tau_.real();
    a -= std::round(a);
    b -= std::round(b);
    double best = 1e300;
    for (int dm = -1; dm <= 1; ++dm)
        for (int dn = -1; dn <= 1; ++dn) {
            cx w = (a + dm) + (b + dn) * tau_;
            best = std::min(best, std::abs(w));
        }
    return best;
}

cx wp(cx z, const EllipticContext& ctx) {
    if (ctx.lattice_distance(z) < 1e-6) throw SymError("wp: too close to a pole");
    // extended-precision accumulation: the double-rounded partial sums limit
    // the differential-identity residual to ~1e-7 on the square lattice
    lcx zl = widen(z);
    lcx s = 1.0L / (zl * zl);
    for (cx w : ctx.lattice()) {
        lcx wl = widen(w);
        lcx d = zl - wl;
        s += 1.0L / (d * d) - 1.0L / (wl * wl);
    }
    auto t = ctx.tails();
    lcx z2 = zl * zl;
    lcx z4 = z2 * z2;
    s += 3.0L * z2 * widen(t[0]) + 5.0L * z4 * widen(t[1]) + 7.0L * z4 * z2 * widen(t[2]) +
         9.0L * z4 * z4 * widen(t[3]);
    return cx(static_cast<double>(s.real()), static_cast<double>(s.imag()));
}

cx wp_prime(cx z, const EllipticContext& ctx) {
    if (ctx.lattice_distance(z) < 1e-6) throw SymError("wp_prime: too close to a pole");
    lcx zl = widen(z);
    lcx sl = -2.0L / (zl * zl * zl);
    for (cx w : ctx.lattice()) {
        lcx d = zl - widen(w);
        sl += -2.0L / (d * d * d);
    }
    cx s(static_cast<double>(sl.real()), static_cast<double>(sl.imag()));
    auto t = ctx.tails();
    cx z2 = z * z;
    cx z3 = z2 * z;
    cx z5 = z3 * z2;
    s += 6.0 * z * t[0] + 20.0 * z3 * t[1] + 42.0 * z5 * t[2] + 72.0 * z5 * z2 * t[3];
    return s;
}

Invariants invariants(const EllipticContext& ctx) {
    return Invariants{ctx.g2(), ctx.g3(), ctx.e1(), ctx.e2(), ctx.e3()};
}

cx wp1(cx z, const EllipticContext& ctx, int steps) {
    cx base = 0.25 + 0.25 * ctx.tau();
    cx cur = std::sqrt(wp(base, ctx) - ctx.e1());  // principal branch at z*
    for (int k = 1; k <= steps; ++k) {
        cx zk = base + (z - base) * (static_cast<double>(k) / steps);
        cx val = wp(zk, ctx) - ctx.e1();
        if (std::abs(val) < 1e-8) throw SymError("wp1: path hits a branch point");
        cx r = std::sqrt(val);
        cur = (std::abs(r - cur) <= std::abs(-r - cur)) ? r : -r;
    }
    return cur;
}

cx wp1_prime(cx z, const EllipticContext& ctx, int steps) {
    return wp_prime(z, ctx) / (2.0 * wp1(z, ctx, steps));
}

cx wp_laurent(cx z, const EllipticContext& ctx, int terms) {
    std::vector<cx> c(static_cast<size_t>(terms) + 2, 0.0);
    if (terms >= 2) c[2] = ctx.g2() / 20.0;
    if (terms >= 3) c[3] = ctx.g3() / 28.0;
    for (int k = 4; k <= terms; ++k) {
        cx acc = 0;
        for (int m = 2; m <= k - 2; ++m) acc += c[m] * c[k - m];
        c[static_cast<size_t>(k)] = 3.0 / ((2.0 * k + 1.0) * (k - 3.0)) * acc;
    }
    cx s = 1.0 / (z * z);
    for (int k = 2; k <= terms; ++k)
        s += c[static_cast<size_t>(k)] * std::pow(z, 2 * k - 2);
    return s;
}

EmbeddingPoint embed(cx z, const EllipticContext& ctx) {
    cx p = wp(z, ctx);
    cx p1 = wp1(z, ctx);
    EmbeddingPoint out;
    out.x = {p, wp_prime(z, ctx), cx(1, 0)};
    out.xi = {p1, wp1_prime(z, ctx), p1 * p};
    return out;
}

std::array<double, 4> verify_affine_ideal(cx z, const EllipticContext& ctx) {
    cx x = wp(z, ctx);
    cx y = wp_prime(z, ctx);
    cx p1 = wp1(z, ctx);
    cx p1p = wp1_prime(z, ctx);
    std::array<double, 4> r{};
    r[0] = std::abs(y * y - (4.0 * x * x * x - ctx.g2() * x - ctx.g3()));
    r[1] = std::abs(2.0 * (x - ctx.e1()) * p1p - y * p1);
    r[2] = std::abs(y * p1p - 2.0 * (x - ctx.e2()) * (x - ctx.e3()) * p1);
    r[3] = std::abs(p1 * x - x * p1);
    return r;
}

std::array<double, 4> verify_homogeneous_ideal(const EmbeddingPoint& p,
                                               const EllipticContext& ctx) {
    const cx& x0 = p.x[0];
    const cx& x1 = p.x[1];
    const cx& x2 = p.x[2];
    const cx& k1 = p.xi[0];
    const cx& k2 = p.xi[1];
    const cx& k3 = p.xi[2];
    std::array<double, 4> r{};
    r[0] = std::abs(x1 * x1 * x2 -
                    (4.0 * x0 * x0 * x0 - ctx.g2() * x0 * x2 * x2 - ctx.g3() * x2 * x2 * x2));
    r[1] = std::abs(2.0 * (x0 * x2 - ctx.e1() * x2 * x2) * k2 - x1 * x2 * k1);
    r[2] = std::abs(x1 * x2 * k2 - 2.0 * (x0 - ctx.e2() * x2) * (x0 - ctx.e3() * x2) * k1);
    r[3] = std::abs(k3 * x2 - x0 * k1);
    return r;
}

AlternateCubicFit fit_alternate_cubic(const EllipticContext& ctx, const std::vector<cx>& zs) {
    // least squares for y^2 - 4x^3 = -a1 x^2 - a2 over the samples
    cx s_x4 = 0, s_x2 = 0, s_bx2 = 0, s_b = 0;
    double n = static_cast<double>(zs.size());
    std::vector<std::pair<cx, cx>> rows;
    for (cx z : zs) {
        cx x = wp(z, ctx);
        cx y = wp_prime(z, ctx);
        cx b = y * y - 4.0 * x * x * x;
        cx x2 = x * x;
        rows.push_back({x2, b});
        s_x4 += x2 * x2;
        s_x2 += x2;
        s_bx2 += b * x2;
        s_b += b;
    }
    // normal equations for b = -a1 x^2 - a2 (complex least squares without
    // conjugation: exact when the model fits)
    cx det = s_x4 * n - s_x2 * s_x2;
    AlternateCubicFit fit;
    fit.a1 = -(s_bx2 * n - s_b * s_x2) / det;
    fit.a2 = -(s_x4 * s_b - s_x2 * s_bx2) / det;
    for (auto& [x2, b] : rows)
        fit.max_residual = std::max(fit.max_residual, std::abs(b + fit.a1 * x2 + fit.a2));
    return fit;
}

std::vector<cx> sample_points(const EllipticContext& ctx, int count, unsigned long long seed) {
    Rng rng(seed);
    std::vector<cx> out;
    while (static_cast<int>(out.size()) < count) {
        double a = rng.real(0.0, 1.0);
        double b = rng.real(0.0, 1.0);
        // stay away from lattice points and half-periods in fractional
        // coordinates
        bool ok = true;
        for (double a0 : {0.0, 0.5, 1.0})
            for (double b0 : {0.0, 0.5, 1.0})
                if (std::max(std::abs(a - a0), std::abs(b - b0)) < 0.15) ok = false;
        if (!ok) continue;
        out.push_back(a + b * ctx.tau());
    }
    return out;
}

}  // namespace susyk::ell
