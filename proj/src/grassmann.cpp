#include "susykern/grassmann.hpp"

#include <bit>
#include <sstream>

namespace susyk::grass {

GrassmannElement::GrassmannElement(int n) : n_(n) {
    if (n < 0 || n > kMaxN) throw SymError("Grassmann algebra size out of range");
}

GrassmannElement GrassmannElement::scalar(int n, Scalar c) {
    GrassmannElement r(n);
    r.set(0, std::move(c));
    return r;
}

GrassmannElement GrassmannElement::gen(int n, int i) {
    if (i < 1 || i > n) throw SymError("generator index out of range");
    GrassmannElement r(n);
    r.set(1u << (i - 1), Scalar(1));
    return r;
}

Scalar GrassmannElement::coeff(unsigned mask) const {
    auto it = terms_.find(mask);
    return it == terms_.end() ? Scalar(0) : it->second;
}

void GrassmannElement::set(unsigned mask, Scalar c) {
    if (c.is_zero())
        terms_.erase(mask);
    else
        terms_[mask] = std::move(c);
}

std::optional<int> GrassmannElement::parity() const {
    std::optional<int> p;
    for (auto& [m, c] : terms_) {
        int q = std::popcount(m) & 1;
        if (p && *p != q) return std::nullopt;
        p = q;
    }
    return p ? p : std::optional<int>(0);  // zero is even by convention
}

bool GrassmannElement::is_even() const {
    auto p = parity();
    return p && *p == 0;
}

bool GrassmannElement::is_odd() const {
    if (is_zero()) return true;
    auto p = parity();
    return p && *p == 1;
}

GrassmannElement GrassmannElement::operator-() const {
    GrassmannElement r(n_);
    for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

GrassmannElement GrassmannElement::operator+(const GrassmannElement& o) const {
    if (n_ != o.n_) throw SymError("mismatched Grassmann algebras");
    GrassmannElement r = *this;
    for (auto& [m, c] : o.terms_) r.set(m, r.coeff(m) + c);
    return r;
}

GrassmannElement GrassmannElement::operator-(const GrassmannElement& o) const {
    return *this + (-o);
}

namespace {

// sign of merging sorted generator lists: (-1)^{#pairs (a in A, b in B), a > b}
int merge_sign(unsigned a, unsigned b) {
    int inv = 0;
    while (b) {
        unsigned lb = b & (~b + 1u);  // lowest set bit of b
        inv += std::popcount(a & ~(lb - 1u) & ~lb);  // generators of a above lb
        b &= b - 1u;
    }
    return (inv & 1) ? -1 : 1;
}

}  // namespace

GrassmannElement GrassmannElement::operator*(const GrassmannElement& o) const {
    if (n_ != o.n_) throw SymError("mismatched Grassmann algebras");
    GrassmannElement r(n_);
    for (auto& [ma, ca] : terms_)
        for (auto& [mb, cb] : o.terms_) {
            if (ma & mb) continue;  // repeated generator
            Scalar c = ca * cb;
            if (merge_sign(ma, mb) < 0) c = -c;
            r.set(ma | mb, r.coeff(ma | mb) + c);
        }
    return r;
}

GrassmannElement GrassmannElement::operator*(const Scalar& c) const {
    GrassmannElement r(n_);
    for (auto& [m, co] : terms_) r.set(m, co * c);
    return r;
}

bool GrassmannElement::operator==(const GrassmannElement& o) const {
    return n_ == o.n_ && terms_ == o.terms_;
}

GrassmannElement GrassmannElement::inv() const {
    Scalar b = body();
    if (b.is_zero()) throw SymError("Grassmann element not invertible (zero body)");
    // x = b(1 + u) with u nilpotent: 1/x = (1/b) sum (-u)^k
    GrassmannElement u = *this * (Scalar(1) / b);
    u.set(0, Scalar(0));
    GrassmannElement r = scalar(n_, Scalar(1));
    GrassmannElement upow = scalar(n_, Scalar(1));
    for (int k = 1; k <= n_; ++k) {
        upow = upow * u;
        if (upow.is_zero()) break;
        r = (k & 1) ? r - upow : r + upow;
    }
    return r * (Scalar(1) / b);
}

GrassmannElement gmul(const GrassmannElement& x, const GrassmannElement& y) { return x * y; }
GrassmannElement ginv(const GrassmannElement& x) { return x.inv(); }

std::string GrassmannElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : terms_) {
        std::string cs = c.str();
        bool simple = c.is_real() ? c.re() >= 0 : (c.re() == 0 || c.im() == 0);
        if (!first) os << "+";
        if (simple)
            os << cs;
        else
            os << "(" << cs << ")";
        for (int i = 0; i < kMaxN; ++i)
            if (m & (1u << i)) os << "*h" << (i + 1);
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------- evaluation

GrassmannElement g_eval(const sym::Expr& e, int n,
                        const std::map<std::string, GrassmannElement>& env) {
    using sym::Kind;
    switch (e->kind) {
        case Kind::Const: return GrassmannElement::scalar(n, e->value);
        case Kind::Var: {
            auto it = env.find(e->name);
            if (it == env.end()) throw SymError("unbound name '" + e->name + "'");
            return it->second;
        }
        case Kind::Add: {
            GrassmannElement r(n);
            for (auto& a : e->args) r = r + g_eval(a, n, env);
            return r;
        }
        case Kind::Mul: {
            GrassmannElement r = GrassmannElement::scalar(n, Scalar(1));
            for (auto& a : e->args) r = r * g_eval(a, n, env);
            return r;
        }
        case Kind::Pow: {
            GrassmannElement b = g_eval(e->args[0], n, env);
            int k = e->ipow;
            if (k < 0) {
                b = b.inv();
                k = -k;
            }
            GrassmannElement r = GrassmannElement::scalar(n, Scalar(1));
            for (int j = 0; j < k; ++j) r = r * b;
            return r;
        }
        case Kind::Div:
            return g_eval(e->args[0], n, env) * g_eval(e->args[1], n, env).inv();
        default:
            throw SymError("analytic node not supported over a Grassmann algebra");
    }
}

GrassmannElement parse_grassmann(const std::string& text, int n) {
    sym::VarRegistry reg;
    std::map<std::string, GrassmannElement> env;
    for (int i = 1; i <= n; ++i) {
        std::string name = "h" + std::to_string(i);
        reg.add(name);
        env.emplace(name, GrassmannElement::gen(n, i));
    }
    return g_eval(sym::parse(text, reg), n, env);
}

// ---------------------------------------------------------------- D numbers

DNumber dmul(const DNumber& x, const DNumber& y) {
    return {x.a * y.a + x.alpha * y.alpha, x.a * y.alpha + x.alpha * y.a};
}

DNumber dinv(const DNumber& x) {
    // (a + theta alpha)(a - theta alpha) = a^2 since alpha^2 = 0, theta^2 = -1
    GrassmannElement a2inv = (x.a * x.a).inv();
    return {x.a * a2inv, -(x.alpha * a2inv)};
}

bool d_equal(const DNumber& x, const DNumber& y) { return x.a == y.a && x.alpha == y.alpha; }

// ---------------------------------------------------------------- matrices

Mat2 mat2_identity(int n) {
    Mat2 m{{GrassmannElement(n), GrassmannElement(n), GrassmannElement(n),
            GrassmannElement(n)}};
    m.at(0, 0) = GrassmannElement::scalar(n, Scalar(1));
    m.at(1, 1) = GrassmannElement::scalar(n, Scalar(1));
    return m;
}

Mat2 mat2_mul(const Mat2& x, const Mat2& y) {
    int n = x.e[0].n();
    Mat2 r{{GrassmannElement(n), GrassmannElement(n), GrassmannElement(n),
            GrassmannElement(n)}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.at(i, j) = x.at(i, 0) * y.at(0, j) + x.at(i, 1) * y.at(1, j);
    return r;
}

bool mat2_equal(const Mat2& x, const Mat2& y) {
    for (int k = 0; k < 4; ++k)
        if (!(x.e[static_cast<size_t>(k)] == y.e[static_cast<size_t>(k)])) return false;
    return true;
}

Mat2 d_to_gl11(const DNumber& x) {
    if (!x.a.is_invertible()) throw SymError("d_to_gl11: non-invertible input");
    return Mat2{{x.a, x.alpha, x.alpha, x.a}};
}

PsiNormalization normalize_psi(const Mat2& psi) {
    int n = psi.e[0].n();
    const GrassmannElement& alpha = psi.at(0, 0);
    const GrassmannElement& a = psi.at(0, 1);
    if (!alpha.is_odd() || !a.is_even() || !a.is_invertible())
        throw SymError("normalize_psi: matrix not of the involution form");
    if (!(psi.at(1, 0) == a.inv()) || !(psi.at(1, 1) == -alpha))
        throw SymError("normalize_psi: matrix not of the involution form");
    if (!mat2_equal(mat2_mul(psi, psi), mat2_identity(n)))
        throw SymError("normalize_psi: matrix does not square to the identity");
    GrassmannElement zero(n), one = GrassmannElement::scalar(n, Scalar(1));
    GrassmannElement ainv = a.inv();
    // P Psi P^-1 = Phi requires the +a^-1 alpha entry; see README notes on the
    // sign of the lower-left entry.
    Mat2 P{{ainv, zero, ainv * alpha, one}};
    Mat2 Pinv{{a, zero, -alpha, one}};
    if (!mat2_equal(mat2_mul(P, Pinv), mat2_identity(n)))
        throw SymError("normalize_psi: internal inverse check failed");
    return {P, Pinv};
}

// ---------------------------------------------------------------- vectors

Vec4 phi_apply(const Vec4& v) { return {v[2], v[3], v[0], v[1]}; }

std::optional<int> vec4_parity(const Vec4& v) {
    std::optional<int> p;
    for (int k = 0; k < 4; ++k) {
        const auto& x = v[static_cast<size_t>(k)];
        if (x.is_zero()) continue;
        auto q = x.parity();
        if (!q) return std::nullopt;
        int vp = (k < 2) ? *q : (*q ^ 1);  // E-slot coefficients flip parity
        if (p && *p != vp) return std::nullopt;
        p = vp;
    }
    return p ? p : std::optional<int>(0);
}

Vec4 right_theta_action(const Vec4& v) {
    auto p = vec4_parity(v);
    if (!p) throw SymError("right_theta_action: non-homogeneous vector");
    Vec4 w = phi_apply(v);
    if (*p == 1)
        for (auto& x : w) x = -x;
    return w;
}

}  // namespace susyk::grass
