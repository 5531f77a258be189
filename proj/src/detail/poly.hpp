#pragma once

// Internal normal-form engine: expressions are flattened to quotients of
// multivariate polynomials over Q(i) in "atoms" (variables and analytic
// subterms with normalized arguments). Not part of the public API.

#include "susykern/expr.hpp"

#include <map>
#include <utility>
#include <vector>

namespace susyk::sym::detail {

enum class AtomKind { Var, Exp, Log, Sqrt, Opaque };

struct Atom {
    AtomKind kind;
    std::string name;  // Var, Opaque
    Expr arg;          // normalized argument (Exp/Log/Sqrt/Opaque); Sqrt args are polynomial
    std::string key;   // canonical identity string
};

int intern_atom(AtomKind kind, const std::string& name, const Expr& arg);
const Atom& atom_info(int id);

// Sorted (atom id, exponent>0) pairs.
using Monomial = std::vector<std::pair<int, int>>;

// Graded lex: total degree first, then exponent vectors.
struct MonoLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

using Poly = std::map<Monomial, Scalar, MonoLess>;

Poly p_const(const Scalar& c);
Poly p_atom(int id);
bool p_is_zero(const Poly& p);
bool p_is_const(const Poly& p);
Poly p_neg(const Poly& a);
Poly p_add(const Poly& a, const Poly& b);
Poly p_sub(const Poly& a, const Poly& b);

/// Product with the exp/sqrt monomial rewrites applied to the result.
Poly p_mul(const Poly& a, const Poly& b);
Poly p_pow(const Poly& a, unsigned n);

/// Exact division; throws SymError if b does not divide a.
Poly p_divexact(const Poly& a, const Poly& b);

/// GCD by primitive pseudo-remainder sequences; result defined up to a unit.
Poly p_gcd(Poly a, Poly b);

/// Canonical rational function: cancelled, denominator lead coefficient 1,
/// denominator free of exp atoms and of globally-common sqrt factors.
struct RF {
    Poly num;
    Poly den;  // never zero
};

RF rf_make(Poly num, Poly den);
RF rf_const(const Scalar& c);
bool rf_is_zero(const RF& a);
RF rf_add(const RF& a, const RF& b);
RF rf_sub(const RF& a, const RF& b);
RF rf_neg(const RF& a);
RF rf_mul(const RF& a, const RF& b);
RF rf_div(const RF& a, const RF& b);
RF rf_pow(const RF& a, int n);

/// Flatten an expression tree to canonical RF form.
RF to_rf(const Expr& e);

/// Rebuild a canonical expression tree (sorted monomials, Div only if needed).
Expr rf_to_expr(const RF& rf);
Expr poly_to_expr(const Poly& p);

bool poly_has_atom_kind(const Poly& p, AtomKind k);

/// All atom ids occurring in the polynomial.
std::vector<int> poly_atoms(const Poly& p);

}  // namespace susyk::sym::detail
