#pragma once

#include "susykern/expr.hpp"
#include "susykern/scalar.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace susyk::grass {

/// Element of the Grassmann algebra on N anticommuting generators h1..hN,
/// stored as sorted-monomial bitmask -> coefficient. N is capped at 8.
class GrassmannElement {
public:
    static constexpr int kMaxN = 8;

    explicit GrassmannElement(int n = 0);
    static GrassmannElement scalar(int n, Scalar c);
    static GrassmannElement gen(int n, int i);  // generator h_i, 1-based

    int n() const { return n_; }
    const std::map<unsigned, Scalar>& terms() const { return terms_; }
    Scalar coeff(unsigned mask) const;
    Scalar body() const { return coeff(0); }
    bool is_zero() const { return terms_.empty(); }
    bool is_invertible() const { return !body().is_zero(); }

    /// 0 even, 1 odd; nullopt for mixed parity (0 counts as either).
    std::optional<int> parity() const;
    bool is_even() const;
    bool is_odd() const;

    GrassmannElement operator-() const;
    GrassmannElement operator+(const GrassmannElement& o) const;
    GrassmannElement operator-(const GrassmannElement& o) const;
    GrassmannElement operator*(const GrassmannElement& o) const;  // gmul
    GrassmannElement operator*(const Scalar& c) const;
    bool operator==(const GrassmannElement& o) const;
    bool operator!=(const GrassmannElement& o) const { return !(*this == o); }

    /// Exact inverse via the nilpotent geometric series; throws on zero body.
    GrassmannElement inv() const;

    std::string str() const;  // parseable "2+3*h1*h2-i*h3" form

    void set(unsigned mask, Scalar c);

private:
    int n_;
    std::map<unsigned, Scalar> terms_;
};

GrassmannElement gmul(const GrassmannElement& x, const GrassmannElement& y);
GrassmannElement ginv(const GrassmannElement& x);

/// Parse "2 + 3*h1*h2 - i*h3" over Lambda_n (generators h1..hn). Division and
/// integer powers are allowed when the relevant bodies are invertible.
GrassmannElement parse_grassmann(const std::string& text, int n);

/// Evaluate a rational expression tree over Lambda_n with the given variable
/// bindings; exp/log/sqrt/opaque nodes are rejected.
GrassmannElement g_eval(const sym::Expr& e, int n,
                        const std::map<std::string, GrassmannElement>& env);

/// Element of D(T) = (D (x) Lambda_n)_0: even part a, odd part alpha, with
/// theta^2 = -1 implicit.
struct DNumber {
    GrassmannElement a;
    GrassmannElement alpha;
};

DNumber dmul(const DNumber& x, const DNumber& y);
DNumber dinv(const DNumber& x);
bool d_equal(const DNumber& x, const DNumber& y);

/// 2x2 matrix over Lambda_n, plain row-by-column product (entries supercommute;
/// order inside each product is preserved anyway).
struct Mat2 {
    std::array<GrassmannElement, 4> e;  // row-major
    GrassmannElement& at(int r, int c) { return e[static_cast<size_t>(2 * r + c)]; }
    const GrassmannElement& at(int r, int c) const { return e[static_cast<size_t>(2 * r + c)]; }
};

Mat2 mat2_identity(int n);
Mat2 mat2_mul(const Mat2& x, const Mat2& y);
bool mat2_equal(const Mat2& x, const Mat2& y);

/// GL(1|1) embedding of an invertible DNumber: [[a, alpha], [alpha, a]].
Mat2 d_to_gl11(const DNumber& x);

/// Given an odd involution Psi = [[alpha, a], [a^-1, -alpha]] (a invertible),
/// return P with P Psi P^-1 equal to the swap matrix Phi = [[0,1],[1,0]].
/// Throws unless Psi has the stated shape and squares to the identity.
struct PsiNormalization {
    Mat2 P;
    Mat2 P_inv;
};
PsiNormalization normalize_psi(const Mat2& psi);

/// 4-vectors over Lambda_n in the basis (e0, e1, E0, E1): first two slots even
/// basis vectors, last two odd.
using Vec4 = std::array<GrassmannElement, 4>;

/// The odd involution Phi on C^{2|2}: swaps (e0,e1) with (E0,E1).
Vec4 phi_apply(const Vec4& v);

/// Parity of a homogeneous vector: coefficients on e-slots carry the vector's
/// parity, coefficients on E-slots the opposite. nullopt if inhomogeneous.
std::optional<int> vec4_parity(const Vec4& v);

/// Right action of theta: v . theta = (-1)^|v| phi(v). Throws on
/// non-homogeneous input.
Vec4 right_theta_action(const Vec4& v);

}  // namespace susyk::grass
