#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "susykern/grassmann.hpp"
#include "susykern/rng.hpp"

using namespace susyk;
using namespace susyk::grass;

static GrassmannElement G(const std::string& s, int n) { return parse_grassmann(s, n); }

TEST_CASE("generator arithmetic") {
    int n = 3;
    auto h1 = GrassmannElement::gen(n, 1), h2 = GrassmannElement::gen(n, 2);
    CHECK(h1 * h2 == G("h1*h2", n));
    CHECK(h2 * h1 == G("-h1*h2", n));
    CHECK((h1 * h1).is_zero());
    CHECK(G("(1+h1*h2)*(1-h1*h2)", n) == G("1", n));
    CHECK(G("h1*h2*h3", n) == -(h2 * h1 * GrassmannElement::gen(n, 3)));
}

TEST_CASE("parse and print round trip") {
    int n = 3;
    auto x = G("2 + 3*h1*h2 - i*h3", n);
    CHECK(parse_grassmann(x.str(), n) == x);
    CHECK(x.body() == Scalar(2));
    CHECK(!x.parity().has_value());
    CHECK(G("1/(2+h1*h2)", n) == G("1/2 - h1*h2/4", n));
}

TEST_CASE("inverse via nilpotent series") {
    int n = 4;
    CHECK(ginv(G("1", n)) == G("1", n));
    auto x = G("2+h1*h2", n);
    CHECK(ginv(x) == G("1/2-1/4*h1*h2", n));
    CHECK(x * ginv(x) == G("1", n));
    CHECK_THROWS_AS(ginv(GrassmannElement::gen(n, 1)), SymError);
    Rng rng(7);
    for (int k = 0; k < 50; ++k) {
        auto y = rng.grassmann(n, 0, true) + rng.grassmann(n, 1);
        CHECK(y * ginv(y) == G("1", n));
    }
}

TEST_CASE("supercommutativity and associativity") {
    int n = 4;
    Rng rng(11);
    for (int k = 0; k < 300; ++k) {
        int px = static_cast<int>(rng.raw() & 1), py = static_cast<int>(rng.raw() & 1);
        auto x = rng.grassmann(n, px), y = rng.grassmann(n, py), z = rng.grassmann(n, 1);
        auto xy = x * y, yx = y * x;
        CHECK(xy == ((px * py) % 2 ? -yx : yx));
        CHECK((x * y) * z == x * (y * z));
        auto pxy = xy.parity();
        if (!x.is_zero() && !y.is_zero() && !xy.is_zero())
            CHECK(*pxy == (px + py) % 2);
    }
}

TEST_CASE("D-number algebra") {
    int n = 3;
    auto one = DNumber{G("1", n), G("0", n)};
    auto x = DNumber{G("1", n), G("h1", n)};
    auto y = DNumber{G("1", n), G("-h1", n)};
    CHECK(d_equal(dmul(x, y), one));
    // (2,h1)*(3,h2) = (6+h1*h2, 2*h2+3*h1)
    auto p = dmul(DNumber{G("2", n), G("h1", n)}, DNumber{G("3", n), G("h2", n)});
    CHECK(p.a == G("6+h1*h2", n));
    CHECK(p.alpha == G("3*h1+2*h2", n));
    CHECK(d_equal(dinv(DNumber{G("2", n), G("0", n)}), DNumber{G("1/2", n), G("0", n)}));
    CHECK(d_equal(dinv(x), y));
    Rng rng(3);
    for (int k = 0; k < 100; ++k) {
        auto u = rng.dnumber(n), v = rng.dnumber(n), w = rng.dnumber(n, false);
        CHECK(d_equal(dmul(dmul(u, v), w), dmul(u, dmul(v, w))));
        // skew field: uv - vu = (2*alpha*alpha', 0)
        auto uv = dmul(u, v), vu = dmul(v, u);
        CHECK(uv.a - vu.a == u.alpha * v.alpha * Scalar(2));
        CHECK(uv.alpha == vu.alpha);
        CHECK(d_equal(dmul(u, dinv(u)), one));
        CHECK(d_equal(dmul(u, one), u));
    }
}

TEST_CASE("GL(1|1) embedding is a homomorphism") {
    int n = 3;
    Rng rng(5);
    auto x = DNumber{G("2", n), G("h1", n)}, y = DNumber{G("3", n), G("h2", n)};
    CHECK(mat2_equal(mat2_mul(d_to_gl11(x), d_to_gl11(y)), d_to_gl11(dmul(x, y))));
    CHECK(mat2_equal(d_to_gl11(DNumber{G("1", n), G("0", n)}), mat2_identity(n)));
    for (int k = 0; k < 200; ++k) {
        auto u = rng.dnumber(n), v = rng.dnumber(n);
        CHECK(mat2_equal(mat2_mul(d_to_gl11(u), d_to_gl11(v)), d_to_gl11(dmul(u, v))));
    }
}

static Mat2 make_psi(const GrassmannElement& a, const GrassmannElement& alpha) {
    return Mat2{{alpha, a, a.inv(), -alpha}};
}

TEST_CASE("Psi normalization conjugates to the swap matrix") {
    int n = 3;
    auto swap = [&](int nn) {
        Mat2 m = mat2_identity(nn);
        std::swap(m.e[0], m.e[1]);
        std::swap(m.e[2], m.e[3]);
        return m;
    };
    // a=1, alpha=0: P is the identity
    auto r0 = normalize_psi(make_psi(G("1", n), G("0", n)));
    CHECK(mat2_equal(r0.P, mat2_identity(n)));
    // a=2, alpha=h1
    auto r1 = normalize_psi(make_psi(G("2", n), G("h1", n)));
    CHECK(r1.P.at(0, 0) == G("1/2", n));
    CHECK(r1.P.at(1, 0) == G("h1/2", n));
    auto conj = mat2_mul(mat2_mul(r1.P, make_psi(G("2", n), G("h1", n))), r1.P_inv);
    CHECK(mat2_equal(conj, swap(n)));
    // a = 1+h1*h2, alpha = h2
    auto psi2 = make_psi(G("1+h1*h2", n), G("h2", n));
    auto r2 = normalize_psi(psi2);
    CHECK(mat2_equal(mat2_mul(mat2_mul(r2.P, psi2), r2.P_inv), swap(n)));
    Rng rng(17);
    for (int k = 0; k < 200; ++k) {
        auto a = rng.grassmann(n, 0, true);
        auto al = rng.grassmann(n, 1);
        auto psi = make_psi(a, al);
        CHECK(mat2_equal(mat2_mul(psi, psi), mat2_identity(n)));
        auto r = normalize_psi(psi);
        CHECK(mat2_equal(mat2_mul(mat2_mul(r.P, psi), r.P_inv), swap(n)));
    }
    CHECK_THROWS_AS(normalize_psi(mat2_identity(n)), SymError);
}

TEST_CASE("phi and the right theta action") {
    int n = 3;
    Vec4 e0{G("1", n), G("0", n), G("0", n), G("0", n)};
    auto im = phi_apply(e0);
    CHECK(im[2] == G("1", n));
    CHECK(im[0].is_zero());
    Rng rng(23);
    for (int k = 0; k < 100; ++k) {
        int p = static_cast<int>(rng.raw() & 1);
        Vec4 v{rng.grassmann(n, p), rng.grassmann(n, p), rng.grassmann(n, p ^ 1),
               rng.grassmann(n, p ^ 1)};
        CHECK(phi_apply(phi_apply(v)) == v);
        auto vt = right_theta_action(v);
        // even v: v.theta = phi(v); odd v: v.theta = -phi(v)
        auto pv = phi_apply(v);
        if (p == 1)
            for (auto& x : pv) x = -x;
        CHECK(vt == pv);
        // theta^2 = -1
        auto vtt = right_theta_action(vt);
        Vec4 mv = v;
        for (auto& x : mv) x = -x;
        CHECK(vtt == mv);
    }
}
