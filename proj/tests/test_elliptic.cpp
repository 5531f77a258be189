#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "susykern/elliptic.hpp"

#include <cmath>

using namespace susyk;
using namespace susyk::ell;

static const std::vector<cx> kTaus = {{0, 1}, {0, 2}, {0.25, 2}};

TEST_CASE("invariants and half-period values") {
    for (cx tau : kTaus) {
        EllipticContext ctx(tau);
        auto inv = invariants(ctx);
        CHECK(std::abs(inv.e1 + inv.e2 + inv.e3) < 1e-10);
        cx pair_sum = inv.e1 * inv.e2 + inv.e1 * inv.e3 + inv.e2 * inv.e3;
        CHECK(std::abs(pair_sum + ctx.g2() / 4.0) < 1e-8);
        CHECK(std::abs(inv.e1 * inv.e2 * inv.e3 - ctx.g3() / 4.0) < 1e-8);
        // e_i are the roots: 4e^3 - g2 e - g3 = 0
        for (cx e : {inv.e1, inv.e2, inv.e3})
            CHECK(std::abs(4.0 * e * e * e - ctx.g2() * e - ctx.g3()) < 1e-8);
        // branch points: wp' vanishes at the half-periods
        for (int i : {1, 2, 3}) CHECK(std::abs(wp_prime(ctx.omega(i), ctx)) < 1e-8);
    }
    // square lattice degeneracy
    EllipticContext square(cx(0, 1));
    CHECK(std::abs(square.g3()) < 1e-8);
    CHECK_THROWS_AS(EllipticContext(cx(0, -1)), SymError);
}

TEST_CASE("symmetry, periodicity, and the differential equation") {
    for (cx tau : kTaus) {
        EllipticContext ctx(tau);
        auto zs = sample_points(ctx, 20, 7);
        for (cx z : zs) {
            cx p = wp(z, ctx);
            CHECK(std::abs(wp(-z, ctx) - p) < 1e-8);
            CHECK(std::abs(wp(z + 1.0, ctx) - p) < 1e-8);
            CHECK(std::abs(wp(z + tau, ctx) - p) < 1e-8);
            cx y = wp_prime(z, ctx);
            CHECK(std::abs(y * y - (4.0 * p * p * p - ctx.g2() * p - ctx.g3())) < 1e-8);
        }
        CHECK_THROWS_AS(wp(cx(1.0, 0.0), ctx), SymError);
    }
}

TEST_CASE("Laurent expansion near the pole") {
    for (cx tau : kTaus) {
        EllipticContext ctx(tau);
        for (cx z : {cx(0.05, 0), cx(0, 0.05), cx(0.03, 0.04)}) {
            // wp - 1/z^2 - g2 z^2/20 - g3 z^4/28 = O(z^6)
            CHECK(std::abs(wp(z, ctx) - wp_laurent(z, ctx, 3)) < 1e-5);
            CHECK(std::abs(wp(z, ctx) - wp_laurent(z, ctx, 6)) < 1e-9);
        }
    }
}

TEST_CASE("branch-tracked square root") {
    for (cx tau : kTaus) {
        EllipticContext ctx(tau);
        auto zs = sample_points(ctx, 20, 11);
        for (cx z : zs) {
            cx p1 = wp1(z, ctx);
            CHECK(std::abs(p1 * p1 - (wp(z, ctx) - ctx.e1())) < 1e-8);
            CHECK(std::abs(2.0 * p1 * wp1_prime(z, ctx) - wp_prime(z, ctx)) < 1e-8);
            // halving the continuation step does not flip the branch
            CHECK(std::abs(wp1(z, ctx, 128) - p1) < 1e-8);
        }
    }
}

TEST_CASE("affine ideal residuals") {
    for (cx tau : kTaus) {
        EllipticContext ctx(tau);
        auto zs = sample_points(ctx, 20, 13);
        for (cx z : zs) {
            auto r = verify_affine_ideal(z, ctx);
            CHECK(r[0] < 1e-8);
            CHECK(r[1] < 1e-8);
            CHECK(r[2] < 1e-8);
            CHECK(r[3] == 0.0);
        }
    }
    // sensitivity: perturbing e1 by 0.1 breaks the second relation
    EllipticContext ctx(cx(0, 2));
    cx z = sample_points(ctx, 1, 17)[0];
    cx x = wp(z, ctx), y = wp_prime(z, ctx);
    cx p1 = wp1(z, ctx), p1p = wp1_prime(z, ctx);
    CHECK(std::abs(2.0 * (x - (ctx.e1() + 0.1)) * p1p - y * p1) > 1e-3);
}

TEST_CASE("embedding and homogeneous ideal") {
    EllipticContext ctx(cx(0, 2));
    auto zs = sample_points(ctx, 20, 19);
    for (cx z : zs) {
        auto p = embed(z, ctx);
        CHECK(p.x[2] == cx(1, 0));
        CHECK(p.xi[2] == p.x[0] * p.xi[0]);  // xi3 = x0 xi1 by construction
        auto r = verify_homogeneous_ideal(p, ctx);
        for (double v : r) CHECK(v < 1e-8);
        CHECK(r[3] < 1e-14);
        // rescaling invariance
        cx lam(1.7, -0.3);
        EmbeddingPoint q = p;
        for (auto& v : q.x) v *= lam;
        for (auto& v : q.xi) v *= lam;
        auto r2 = verify_homogeneous_ideal(q, ctx);
        for (double v : r2) CHECK(v < 1e-8);
    }
}

TEST_CASE("alternate cubic is reported, not asserted") {
    EllipticContext ctx(cx(0, 2));
    auto fit = fit_alternate_cubic(ctx, sample_points(ctx, 12, 23));
    CHECK(std::isfinite(fit.a1.real()));
    CHECK(std::isfinite(fit.a2.real()));
    CHECK(std::isfinite(fit.max_residual));
    // the standard cubic has an x term the alternate model lacks, so a perfect
    // fit is not expected; the report only needs to be reproducible
    auto fit2 = fit_alternate_cubic(ctx, sample_points(ctx, 12, 23));
    CHECK(fit.a1 == fit2.a1);
    CHECK(fit.a2 == fit2.a2);
}

TEST_CASE("sample points respect the margin") {
    EllipticContext ctx(cx(0.25, 2));
    for (cx z : sample_points(ctx, 50, 29)) {
        CHECK(ctx.lattice_distance(z) > 0.1);
        CHECK_NOTHROW(wp(z, ctx));
    }
}
