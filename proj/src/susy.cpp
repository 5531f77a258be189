#include "susykern/susy.hpp"

#include <cmath>

namespace susyk::susy {

using sfn::ChartMorphism;
using sfn::ChartSpec;
using sfn::SuperFunction;
using sfn::SuperVectorField;
using sym::Expr;

const ChartSpec& standard_chart() {
    static const ChartSpec chart{{"z"}, {"zeta"}};
    return chart;
}

SuperVectorField standard_generator() {
    return sfn::parse_vf(standard_chart(), "d/dzeta + zeta*d/dz");
}

sfn::SuperOneForm susy_omega() {
    const ChartSpec& c = standard_chart();
    sfn::SuperOneForm w{c, {}};
    w.coeffs.emplace("z", SuperFunction::constant(c, Scalar(1)));
    w.coeffs.emplace("zeta", -SuperFunction::coordinate(c, "zeta"));
    return w;
}

namespace {

/// Splits an odd field on a 1|1 chart into D = f d/dzeta + g zeta d/dz.
struct SplitD {
    Expr f;
    Expr g;
    std::string even, odd;
};

SplitD split_generator(const SuperVectorField& D) {
    if (D.parity != 1) throw SymError("generator must be odd");
    if (D.chart.evens.size() != 1 || D.chart.odds.size() != 1)
        throw SymError("generator must live on a 1|1 chart");
    SplitD s;
    s.even = D.chart.evens[0];
    s.odd = D.chart.odds[0];
    s.f = sym::zero();
    s.g = sym::zero();
    auto it = D.coeffs.find(s.odd);
    if (it != D.coeffs.end()) s.f = it->second.coeff(0);
    it = D.coeffs.find(s.even);
    if (it != D.coeffs.end()) s.g = it->second.coeff(1);
    return s;
}

/// Units of the whole affine chart (not merely of a localized overlap ring):
/// nonzero constants times exponential factors.
bool global_unit(const Expr& e) {
    switch (e->kind) {
        case sym::Kind::Const: return !e->value.is_zero();
        case sym::Kind::Exp: return true;
        case sym::Kind::Mul: {
            for (auto& a : e->args)
                if (!global_unit(a)) return false;
            return true;
        }
        case sym::Kind::Div: return global_unit(e->args[0]) && global_unit(e->args[1]);
        case sym::Kind::Pow: return global_unit(e->args[0]);
        default: return false;
    }
}

bool unit_or_false(const Expr& e) {
    Expr n = sym::normalize(e);
    if (sym::is_zero_yes(n)) return false;
    return global_unit(n);
}

}  // namespace

FrameReport is_susy(const SuperVectorField& D) {
    SplitD s = split_generator(D);
    SuperVectorField D2 = bracket(D, D);
    Expr fg = sym::zero();
    auto it = D2.coeffs.find(s.even);
    if (it != D2.coeffs.end()) fg = it->second.coeff(0);
    FrameReport rep;
    if (unit_or_false(fg)) {
        rep.ok = true;
        return rep;
    }
    rep.ok = false;
    if (!unit_or_false(s.f))
        rep.witness = "d/d" + s.odd + " coefficient " + sym::print(sym::normalize(s.f)) +
                      " is not a unit";
    else
        rep.witness = s.odd + "*d/d" + s.even + " coefficient " +
                      sym::print(sym::normalize(s.g)) + " is not a unit";
    return rep;
}

CanonicalCoordinates canonicalize(const SuperVectorField& D, const std::string& w_name,
                                  const std::string& eta_name) {
    SplitD s = split_generator(D);
    // chart-local frame condition: f g must be a unit on the chart domain
    // (is_susy asks for more: a unit on all of the affine chart)
    Expr fg = sym::normalize(sym::mul(s.f, s.g));
    if (!sym::is_unit(fg))
        throw SymError("frame condition fails: " + sym::print(fg) + " is not a unit");
    Expr h = sym::div(sym::one(), s.f);
    Expr wprime = sym::normalize(sym::div(h, s.g));
    auto w = sym::antiderivative(wprime, s.even);
    if (!w) throw SymError("no antiderivative for " + sym::print(wprime) +
                           " in the supported class");

    ChartSpec target{{w_name}, {eta_name}};
    std::map<std::string, SuperFunction> assign;
    assign.emplace(w_name, SuperFunction::from_expr(D.chart, *w));
    SuperFunction zeta = SuperFunction::coordinate(D.chart, s.odd);
    assign.emplace(eta_name, zeta * h);
    ChartMorphism F = sfn::make_morphism(D.chart, target, std::move(assign));

    CanonicalCoordinates out{F, SuperFunction(D.chart), SuperFunction(D.chart), true};
    // D is F-related to d/deta + eta d/dw iff D(F*(w)) = F*(eta), D(F*(eta)) = 1
    out.residual_w = apply_vf(D, F.assign.at(w_name)) - F.assign.at(eta_name);
    out.residual_eta =
        apply_vf(D, F.assign.at(eta_name)) - SuperFunction::constant(D.chart, Scalar(1));
    out.global = sym::as_constant(sym::diff(*w, s.even)).has_value();
    return out;
}

CanonicalCoordinates canonical_coordinates(const SuperVectorField& D, const std::string& w_name,
                                           const std::string& eta_name) {
    return canonicalize(D, w_name, eta_name);
}

ChartMorphism candidate_morphism(const SusyAutoCandidate& c) {
    const ChartSpec& chart = standard_chart();
    std::map<std::string, SuperFunction> assign;
    assign.emplace("z", SuperFunction::from_expr(chart, c.f));
    assign.emplace("zeta", SuperFunction::coordinate(chart, "zeta") * c.g);
    return sfn::make_morphism(chart, chart, std::move(assign));
}

std::optional<Expr> is_susy_automorphism(const SusyAutoCandidate& c) {
    Expr fp = sym::normalize(sym::diff(c.f, "z"));
    Expr g2 = sym::normalize(sym::mul(c.g, c.g));
    if (!sym::equal(fp, g2)) return std::nullopt;
    // confirm F*(omega) = t omega coefficientwise
    auto pb = pullback_form(candidate_morphism(c), susy_omega());
    SuperFunction t = SuperFunction::from_expr(standard_chart(), fp);
    auto omega = susy_omega();
    for (auto& [coord, coeff] : omega.coeffs)
        if (!sfn::sf_equal(pb.coeffs.at(coord), t * coeff)) return std::nullopt;
    return fp;
}

std::optional<ClassifiedAuto> classify_c11_automorphism(const SusyAutoCandidate& c) {
    if (!is_susy_automorphism(c)) return std::nullopt;
    // invertible reduced part within the polynomial ansatz: f = a z + b, a != 0
    Expr fp = sym::normalize(sym::diff(c.f, "z"));
    auto a = sym::as_constant(fp);
    if (!a || a->is_zero()) return std::nullopt;
    auto b = sym::as_constant(sym::substitute(c.f, {{"z", sym::zero()}}));
    if (!b) return std::nullopt;
    if (sym::depends_on(c.g, "z")) return std::nullopt;
    ClassifiedAuto out{*a, *b, +1};
    Expr root;
    if (auto ea = a->exact_sqrt())
        root = sym::cnst(*ea);
    else
        root = sym::sqrt(sym::cnst(*a));
    if (sym::equal(c.g, root))
        out.sign = +1;
    else if (sym::equal(c.g, sym::neg(root)))
        out.sign = -1;
    else
        return std::nullopt;
    return out;
}

std::pair<SusyAutoCandidate, SusyAutoCandidate> elliptic_action_generators(const Scalar& tau,
                                                                           int s_a, int s_b) {
    if (!(tau.im() > 0)) throw SymError("tau must have positive imaginary part");
    if ((s_a != 1 && s_a != -1) || (s_b != 1 && s_b != -1))
        throw SymError("signs must be +-1");
    SusyAutoCandidate A{sym::add(sym::var("z"), sym::one()), sym::cnst(Scalar(s_a))};
    SusyAutoCandidate B{sym::add(sym::var("z"), sym::cnst(tau)), sym::cnst(Scalar(s_b))};
    return {A, B};
}

FundamentalDomainResult reduce_to_fundamental_domain(std::complex<double> tau) {
    if (!(tau.imag() > 0)) throw SymError("tau must have positive imaginary part");
    const double eps = 1e-12;
    FundamentalDomainResult r;
    r.tau = tau;
    auto apply_t = [&](long n) {  // tau -> tau + n
        r.tau += static_cast<double>(n);
        r.a += n * r.c;
        r.b += n * r.d;
    };
    auto apply_s = [&]() {  // tau -> -1/tau
        // gamma' = S * gamma with S = [[0,-1],[1,0]]
        r.tau = -1.0 / r.tau;
        long na = -r.c, nb = -r.d, nc = r.a, nd = r.b;
        r.a = na;
        r.b = nb;
        r.c = nc;
        r.d = nd;
    };
    for (int it = 0; it < 512; ++it) {
        long n = std::lround(r.tau.real());
        if (n != 0) apply_t(-n);
        if (std::abs(r.tau) < 1.0 - eps) {
            apply_s();
            continue;
        }
        break;
    }
    // boundary representatives
    if (std::abs(std::abs(r.tau) - 1.0) <= eps && r.tau.real() > eps) apply_s();
    if (std::abs(r.tau.real() - 0.5) <= eps) apply_t(-1);
    // guard against drift from the -1/tau evaluations
    std::complex<double> check =
        (static_cast<double>(r.a) * tau + static_cast<double>(r.b)) /
        (static_cast<double>(r.c) * tau + static_cast<double>(r.d));
    if (std::abs(check - r.tau) > 1e-9) throw SymError("fundamental domain reduction drifted");
    r.tau = check;
    return r;
}

}  // namespace susyk::susy
