#pragma once

#include "susykern/expr.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace susyk::sfn {

/// Coordinate chart on C^{m|n}: named even and odd coordinates.
struct ChartSpec {
    std::vector<std::string> evens;
    std::vector<std::string> odds;

    bool operator==(const ChartSpec& o) const { return evens == o.evens && odds == o.odds; }
    bool operator!=(const ChartSpec& o) const { return !(*this == o); }
    int odd_index(const std::string& name) const;   // -1 if absent
    bool has_even(const std::string& name) const;
    bool is_coordinate(const std::string& name) const;
};

/// Superfunction on a chart: sum over sorted odd monomials zeta_I of
/// coefficient Exprs in the even coordinates (coefficients written on the
/// left). Odd monomials are tracked as bitmasks over the chart's odd names.
class SuperFunction {
public:
    explicit SuperFunction(ChartSpec chart);
    static SuperFunction from_expr(ChartSpec chart, sym::Expr even_part);
    static SuperFunction constant(ChartSpec chart, Scalar c);
    static SuperFunction coordinate(ChartSpec chart, const std::string& name);

    const ChartSpec& chart() const { return chart_; }
    const std::map<unsigned, sym::Expr>& terms() const { return terms_; }
    sym::Expr coeff(unsigned mask) const;  // zero() if absent
    void set(unsigned mask, sym::Expr e);  // drops exact zeros

    bool is_zero() const;                  // all coefficients Yes-zero
    std::optional<int> parity() const;     // 0 even, 1 odd, nullopt mixed
    /// Reduced (all odd coordinates to zero) part.
    sym::Expr body() const { return coeff(0); }

    SuperFunction operator-() const;
    SuperFunction operator+(const SuperFunction& o) const;
    SuperFunction operator-(const SuperFunction& o) const;
    SuperFunction operator*(const SuperFunction& o) const;
    SuperFunction operator*(const sym::Expr& e) const;

    /// Multiplicative inverse via the nilpotent series; requires the body to
    /// be a unit on the chart domain.
    SuperFunction inverse() const;

    SuperFunction diff_even(const std::string& name) const;
    /// Left derivative with respect to an odd coordinate.
    SuperFunction diff_odd(const std::string& name) const;

    std::string str() const;

private:
    ChartSpec chart_;
    std::map<unsigned, sym::Expr> terms_;
};

bool sf_equal(const SuperFunction& a, const SuperFunction& b);

/// Evaluate an expression tree over the superfunction ring: variables are
/// looked up in env (absent ones become even symbols on the chart); Div, Exp,
/// Log, Sqrt expand through nilpotent series around the body.
SuperFunction sf_eval(const sym::Expr& e, const ChartSpec& chart,
                      const std::map<std::string, SuperFunction>& env);

/// Parse a superfunction literal like "f0(z) + f1(z)*zeta" on the chart.
SuperFunction parse_superfunction(const ChartSpec& chart, const std::string& text);

/// Homogeneous super vector field: one coefficient superfunction per
/// coordinate (evens and odds), coefficients acting from the left.
struct SuperVectorField {
    ChartSpec chart;
    std::map<std::string, SuperFunction> coeffs;
    int parity = 0;
};

/// Build a vector field, validating the parity pattern of the coefficients.
SuperVectorField make_vf(ChartSpec chart, std::map<std::string, SuperFunction> coeffs,
                         int parity);

/// Parse "d/dzeta + zeta*d/dz" style literals (coefficient to the left of each
/// d/d<name> factor); parity inferred, must be homogeneous.
SuperVectorField parse_vf(const ChartSpec& chart, const std::string& text);

SuperFunction apply_vf(const SuperVectorField& X, const SuperFunction& f);

/// Super Lie bracket [X,Y] = XY - (-1)^{|X||Y|} YX, computed through the action
/// on coordinates.
SuperVectorField bracket(const SuperVectorField& X, const SuperVectorField& Y);

bool vf_equal(const SuperVectorField& a, const SuperVectorField& b);
SuperVectorField vf_scale(const SuperVectorField& X, const SuperFunction& u);

/// Super one-form: coefficient superfunction per dz_i / dzeta_j, coefficients
/// on the left of the differentials.
struct SuperOneForm {
    ChartSpec chart;
    std::map<std::string, SuperFunction> coeffs;
};

SuperOneForm exterior_d(const SuperFunction& f);

/// Contraction <sum f_a dx_a, sum g_b d_b> = sum f_a g_a (with <dzeta, d_zeta> = 1).
SuperFunction pair(const SuperOneForm& omega, const SuperVectorField& X);

bool form_equal(const SuperOneForm& a, const SuperOneForm& b);

/// Morphism between charts, stored as pullback data: each target coordinate is
/// assigned a superfunction on the source of matching parity.
struct ChartMorphism {
    ChartSpec source;
    ChartSpec target;
    std::map<std::string, SuperFunction> assign;
};

ChartMorphism make_morphism(ChartSpec source, ChartSpec target,
                            std::map<std::string, SuperFunction> assign);
ChartMorphism identity_morphism(const ChartSpec& chart);

SuperFunction pullback_fn(const ChartMorphism& F, const SuperFunction& f);
SuperOneForm pullback_form(const ChartMorphism& F, const SuperOneForm& omega);

/// compose(F, G): apply G then F at the level of points, so the pullback of a
/// target function goes through F first, then G.
ChartMorphism compose(const ChartMorphism& F, const ChartMorphism& G);

bool morphism_equal(const ChartMorphism& a, const ChartMorphism& b);

}  // namespace susyk::sfn
