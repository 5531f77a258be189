#pragma once

#include "susykern/scalar.hpp"

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace susyk::sym {

enum class Kind { Const, Var, Add, Mul, Pow, Div, Exp, Log, Sqrt, Opaque };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

/// Immutable expression tree over even variables. Coefficients are exact
/// Gaussian rationals; the analytic fragment is the closed list
/// exp / log / sqrt / registered opaque symbols.
struct ExprNode {
    Kind kind;
    Scalar value;            // Const
    std::string name;        // Var, Opaque
    std::vector<Expr> args;  // Add, Mul (n-ary); Pow, Div, Exp, Log, Sqrt, Opaque
    int ipow = 0;            // Pow exponent (integer only)
};

// -- builders ---------------------------------------------------------------

Expr cnst(Scalar v);
Expr cnst(long v);
Expr var(std::string name);
Expr add(Expr a, Expr b);
Expr add(std::vector<Expr> terms);
Expr sub(Expr a, Expr b);
Expr neg(Expr a);
Expr mul(Expr a, Expr b);
Expr mul(std::vector<Expr> factors);
Expr pow(Expr base, int n);
Expr div(Expr num, Expr den);
Expr exp(Expr a);
Expr log(Expr a);
Expr sqrt(Expr a);
Expr opaque(std::string name, Expr arg);

inline Expr zero() { return cnst(0); }
inline Expr one() { return cnst(1); }

// -- opaque symbol registry --------------------------------------------------

/// Rule giving d/dz name(u(z)) = rule(u) * u'(z).
using DerivRule = std::function<Expr(const Expr&)>;

/// Registration must happen before concurrent use; the registry is read-only
/// afterwards. Registering "wp" -> "wp_prime" means d wp(u) = wp_prime(u) u'.
void register_opaque(const std::string& name, const std::string& derivative_name);
void register_opaque(const std::string& name, DerivRule rule);
bool opaque_registered(const std::string& name);

// -- variable scope ----------------------------------------------------------

class VarRegistry {
public:
    VarRegistry() = default;
    explicit VarRegistry(std::vector<std::string> names);
    void add(const std::string& name);
    bool has(const std::string& name) const;
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
};

// -- parsing / printing -------------------------------------------------------

struct ParseError : SymError {
    ParseError(const std::string& what, size_t pos)
        : SymError(what + " at position " + std::to_string(pos)), position(pos) {}
    size_t position;
};

Expr parse(const std::string& text, const VarRegistry& registry);
std::string print(const Expr& e);

// -- core operations ----------------------------------------------------------

Expr diff(const Expr& e, const std::string& v);

/// Canonical form: rational subexpressions as a cancelled numerator/denominator
/// pair with sorted monomials; exp(a)exp(b) -> exp(a+b), sqrt(x)^2 -> x.
/// Structurally equal iff mathematically equal within the rational fragment.
Expr normalize(const Expr& e);

enum class Tri { Yes, No, Unknown };

struct ZeroResult {
    Tri verdict;
    /// For No outside the rational fragment: a numeric sample where |e| > 0.
    std::map<std::string, std::complex<double>> witness;
};

ZeroResult is_zero(const Expr& e);
bool is_zero_yes(const Expr& e);

/// Exprs equal after normalization (Yes-zero difference).
bool equal(const Expr& a, const Expr& b);

/// Antiderivative in the supported class: rational functions whose denominators
/// split into linear factors over Q(i) (log terms only when allowed), plus
/// polynomial * exp(linear) terms. Absence is signalled by nullopt.
std::optional<Expr> antiderivative(const Expr& e, const std::string& v, bool allow_log = false);

using EvalEnv = std::map<std::string, std::complex<double>>;
using EvalHooks = std::map<std::string, std::function<std::complex<double>(std::complex<double>)>>;

std::complex<double> eval(const Expr& e, const EvalEnv& env, const EvalHooks& hooks = {});

// -- structural helpers --------------------------------------------------------

/// Substitute variables by expressions (simultaneous), then normalize.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& repl);

/// Free variables appearing in e.
std::vector<std::string> free_vars(const Expr& e);

bool depends_on(const Expr& e, const std::string& v);

/// If normalize(e) is c * v^d (a Laurent monomial in the single variable v,
/// constant c in Q(i)), return (c, d).
std::optional<std::pair<Scalar, int>> as_laurent_monomial(const Expr& e, const std::string& v);

/// If e normalizes to a constant, return it.
std::optional<Scalar> as_constant(const Expr& e);

/// Nowhere-vanishing on the localized chart domain within the symbolic class:
/// a nonzero rational function, optionally times exp factors. Sound for the
/// expression classes the kernel generates; throws on opaque-bearing input.
bool is_unit(const Expr& e);

}  // namespace susyk::sym
