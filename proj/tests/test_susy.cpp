#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "susykern/rng.hpp"
#include "susykern/susy.hpp"

#include <complex>

using namespace susyk;
using namespace susyk::susy;

static const sfn::ChartSpec& C = standard_chart();

static sfn::SuperVectorField field(const std::string& s) { return sfn::parse_vf(C, s); }

TEST_CASE("frame condition") {
    CHECK(is_susy(standard_generator()).ok);
    auto bad = is_susy(field("d/dzeta"));
    CHECK(!bad.ok);
    CHECK(!bad.witness.empty());
    CHECK(is_susy(field("d/dzeta + exp(z)*zeta*d/dz")).ok);
    CHECK(is_susy(field("2*d/dzeta + exp(-z)*zeta*d/dz")).ok);
    CHECK(!is_susy(field("z*d/dzeta + zeta*d/dz")).ok);
    CHECK_THROWS_AS(is_susy(field("d/dz")), SymError);
}

TEST_CASE("canonical coordinates: pinned cases") {
    auto id = canonical_coordinates(standard_generator());
    CHECK(sym::equal(id.F.assign.at("w").body(), sym::var("z")));
    CHECK(sym::equal(id.F.assign.at("eta").coeff(1), sym::one()));
    CHECK(id.residual_w.is_zero());
    CHECK(id.residual_eta.is_zero());
    CHECK(id.global);

    // f=1, g=e^z: w = -e^{-z}, a local-only change of coordinates
    auto r = canonical_coordinates(field("d/dzeta + exp(z)*zeta*d/dz"));
    CHECK(sym::equal(r.F.assign.at("w").body(),
                     sym::neg(sym::exp(sym::neg(sym::var("z"))))));
    CHECK(r.residual_w.is_zero());
    CHECK(r.residual_eta.is_zero());
    CHECK(!r.global);

    // f=2, g=1: h=1/2, w=z/2, eta=zeta/2
    auto s = canonical_coordinates(field("2*d/dzeta + zeta*d/dz"));
    CHECK(sym::equal(s.F.assign.at("w").body(), sym::div(sym::var("z"), sym::cnst(2))));
    CHECK(sym::equal(s.F.assign.at("eta").coeff(1), sym::cnst(Scalar(Rational(1, 2)))));
    CHECK(s.residual_w.is_zero());
    CHECK(s.residual_eta.is_zero());
    CHECK(s.global);
}

TEST_CASE("canonical coordinates: random units have zero residual") {
    Rng rng(41);
    for (int k = 0; k < 25; ++k) {
        Scalar c1 = rng.scalar(false), c2 = rng.scalar(false);
        long a1 = rng.integer(-2, 2), a2 = rng.integer(-2, 2);
        sym::Expr f = sym::mul(sym::cnst(c1), sym::exp(sym::mul(sym::cnst(a1), sym::var("z"))));
        sym::Expr g = sym::mul(sym::cnst(c2), sym::exp(sym::mul(sym::cnst(a2), sym::var("z"))));
        std::map<std::string, sfn::SuperFunction> coeffs;
        coeffs.emplace("zeta", sfn::SuperFunction::from_expr(C, f));
        coeffs.emplace("z", sfn::SuperFunction::coordinate(C, "zeta") * g);
        auto D = sfn::make_vf(C, coeffs, 1);
        auto r = canonical_coordinates(D);
        CHECK(r.residual_w.is_zero());
        CHECK(r.residual_eta.is_zero());
        CHECK(r.global == (a1 + a2 == 0));
    }
}

TEST_CASE("canonical coordinates: unsupported antiderivative") {
    sym::Expr g = sym::div(sym::one(), sym::exp(sym::pow(sym::var("z"), 2)));
    std::map<std::string, sfn::SuperFunction> coeffs;
    coeffs.emplace("zeta", sfn::SuperFunction::constant(C, Scalar(1)));
    coeffs.emplace("z", sfn::SuperFunction::coordinate(C, "zeta") * g);
    CHECK_THROWS_AS(canonical_coordinates(sfn::make_vf(C, coeffs, 1)), SymError);
}

TEST_CASE("the dual form") {
    auto omega = susy_omega();
    CHECK(sfn::pair(omega, standard_generator()).is_zero());
    CHECK(sfn::sf_equal(sfn::pair(omega, field("d/dz")),
                        sfn::SuperFunction::constant(C, Scalar(1))));
    CHECK(sfn::sf_equal(sfn::pair(omega, field("d/dzeta")),
                        -sfn::SuperFunction::coordinate(C, "zeta")));
}

static SusyAutoCandidate cand(const std::string& f, const std::string& g) {
    sym::VarRegistry reg({"z"});
    return {sym::parse(f, reg), sym::parse(g, reg)};
}

TEST_CASE("automorphism factor t = f' = g^2") {
    auto t1 = is_susy_automorphism(cand("z+1", "-1"));
    REQUIRE(t1.has_value());
    CHECK(sym::equal(*t1, sym::one()));
    auto t2 = is_susy_automorphism(cand("4*z+1", "2"));
    REQUIRE(t2.has_value());
    CHECK(sym::equal(*t2, sym::cnst(4)));
    CHECK(!is_susy_automorphism(cand("z", "2")).has_value());
    CHECK(!is_susy_automorphism(cand("z^2", "z")).has_value());
    // non-affine solution of t = f' = g^2 still satisfies the kernel condition
    SusyAutoCandidate cube{sym::pow(sym::var("z"), 3),
                           sym::mul(sym::sqrt(sym::cnst(3)), sym::var("z"))};
    auto t3 = is_susy_automorphism(cube);
    REQUIRE(t3.has_value());
    auto pb = pullback_form(candidate_morphism(cube), susy_omega());
    CHECK(sfn::pair(pb, standard_generator()).is_zero());
}

TEST_CASE("composition closure on affine pairs") {
    Rng rng(59);
    for (int k = 0; k < 50; ++k) {
        Scalar r1 = rng.scalar(false), r2 = rng.scalar(false);
        Scalar b1 = rng.scalar(true), b2 = rng.scalar(true);
        SusyAutoCandidate F1{
            sym::add(sym::mul(sym::cnst(r1 * r1), sym::var("z")), sym::cnst(b1)),
            sym::cnst(r1)};
        SusyAutoCandidate F2{
            sym::add(sym::mul(sym::cnst(r2 * r2), sym::var("z")), sym::cnst(b2)),
            sym::cnst(r2)};
        auto t1 = is_susy_automorphism(F1);
        auto t2 = is_susy_automorphism(F2);
        REQUIRE(t1.has_value());
        REQUIRE(t2.has_value());
        // composite: apply F2 first, then F1
        SusyAutoCandidate F12{sym::substitute(F1.f, {{"z", F2.f}}),
                              sym::mul(sym::substitute(F1.g, {{"z", F2.f}}), F2.g)};
        auto t12 = is_susy_automorphism(F12);
        REQUIRE(t12.has_value());
        CHECK(sym::equal(*t12, sym::mul(sym::substitute(*t1, {{"z", F2.f}}), *t2)));
        CHECK(sfn::pair(pullback_form(candidate_morphism(F12), susy_omega()),
                        standard_generator())
                  .is_zero());
    }
}

TEST_CASE("classification of automorphisms") {
    auto c1 = classify_c11_automorphism(
        {sym::add(sym::mul(sym::cnst(2), sym::var("z")), sym::cnst(3)),
         sym::sqrt(sym::cnst(2))});
    REQUIRE(c1.has_value());
    CHECK(c1->a == Scalar(2));
    CHECK(c1->b == Scalar(3));
    CHECK(c1->sign == +1);
    CHECK(!classify_c11_automorphism(cand("z^2", "z")).has_value());
    Scalar tau(Rational(0), Rational(2));
    auto c2 = classify_c11_automorphism(
        {sym::add(sym::var("z"), sym::cnst(tau)), sym::cnst(-1)});
    REQUIRE(c2.has_value());
    CHECK(c2->a == Scalar(1));
    CHECK(c2->b == tau);
    CHECK(c2->sign == -1);
    auto c3 = classify_c11_automorphism(cand("4*z+1", "2"));
    REQUIRE(c3.has_value());
    CHECK(c3->a == Scalar(4));
    CHECK(c3->sign == +1);
    CHECK(classify_c11_automorphism(cand("4*z+1", "-2"))->sign == -1);
    // passes the factor condition but is not invertible
    CHECK(!classify_c11_automorphism({sym::pow(sym::var("z"), 3),
                                      sym::mul(sym::sqrt(sym::cnst(3)), sym::var("z"))})
               .has_value());
}

TEST_CASE("lattice generators") {
    Scalar tau(Rational(0), Rational(2));
    for (int sa : {+1, -1})
        for (int sb : {+1, -1}) {
            auto [A, B] = elliptic_action_generators(tau, sa, sb);
            auto ta = is_susy_automorphism(A);
            auto tb = is_susy_automorphism(B);
            REQUIRE(ta.has_value());
            REQUIRE(tb.has_value());
            CHECK(sym::equal(*ta, sym::one()));
            CHECK(sym::equal(*tb, sym::one()));
            auto FA = candidate_morphism(A), FB = candidate_morphism(B);
            CHECK(sfn::morphism_equal(sfn::compose(FA, FB), sfn::compose(FB, FA)));
        }
    CHECK_THROWS_AS(elliptic_action_generators(Scalar(1), 1, 1), SymError);
    CHECK_THROWS_AS(elliptic_action_generators(tau, 2, 1), SymError);
}

TEST_CASE("fundamental domain reduction") {
    auto moebius = [](const FundamentalDomainResult& r, std::complex<double> t) {
        return (static_cast<double>(r.a) * t + static_cast<double>(r.b)) /
               (static_cast<double>(r.c) * t + static_cast<double>(r.d));
    };
    auto r1 = reduce_to_fundamental_domain({5.0, 1.0});
    CHECK(std::abs(r1.tau - std::complex<double>(0, 1)) < 1e-12);
    CHECK(r1.a == 1);
    CHECK(r1.b == -5);
    CHECK(r1.c == 0);
    CHECK(r1.d == 1);

    std::vector<std::complex<double>> samples = {
        {0.1, 0.1},  {0.7, 0.3},   {-3.2, 0.01}, {0.49999, 2.0},
        {0.5, 2.0},  {-0.5, 0.9},  {12.25, 0.5}, {0.0, 0.001},
    };
    for (auto tau : samples) {
        auto r = reduce_to_fundamental_domain(tau);
        CHECK(r.a * r.d - r.b * r.c == 1);
        CHECK(std::abs(r.tau.real()) <= 0.5 + 1e-12);
        CHECK(std::abs(r.tau) >= 1.0 - 1e-12);
        CHECK(std::abs(moebius(r, tau) - r.tau) < 1e-12);
        // idempotent
        auto r2 = reduce_to_fundamental_domain(r.tau);
        CHECK(std::abs(r2.tau - r.tau) < 1e-12);
        CHECK(r2.a == 1);
        CHECK(r2.b == 0);
        CHECK(r2.c == 0);
        CHECK(r2.d == 1);
    }
    // boundary ties: |tau| = 1 lands on Re <= 0; Re = 1/2 lands on -1/2
    auto rb = reduce_to_fundamental_domain({0.5, std::sqrt(3.0) / 2.0});
    CHECK(rb.tau.real() <= 1e-12);
    CHECK(std::abs(std::abs(rb.tau) - 1.0) < 1e-12);
    auto rw = reduce_to_fundamental_domain({0.5, 2.0});
    CHECK(std::abs(rw.tau.real() + 0.5) < 1e-12);
    CHECK_THROWS_AS(reduce_to_fundamental_domain({0.0, -1.0}), SymError);
}
