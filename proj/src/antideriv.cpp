#include "susykern/expr.hpp"

#include "detail/poly.hpp"

#include <algorithm>
#include <vector>

// Antiderivatives in the class the kernel needs: rational functions of the
// integration variable whose denominators split into linear factors over Q(i),
// plus polynomial * exp(linear) pieces; coefficients may involve other atoms.

namespace susyk::sym {

namespace {

using detail::Poly;
using detail::RF;

// dense univariate polynomial over Q(i), coeff[k] on v^k, no trailing zeros
using UPoly = std::vector<Scalar>;

void u_trim(UPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

int u_deg(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

// a = q*b + r
void u_divrem(UPoly a, const UPoly& b, UPoly& q, UPoly& r) {
    q.assign(a.size(), Scalar(0));
    while (u_deg(a) >= u_deg(b) && !a.empty()) {
        int d = u_deg(a) - u_deg(b);
        Scalar c = a.back() / b.back();
        q[d] += c;
        for (size_t i = 0; i < b.size(); ++i) a[d + i] -= c * b[i];
        u_trim(a);
    }
    u_trim(q);
    r = std::move(a);
}

UPoly u_deriv(const UPoly& p) {
    UPoly r;
    for (size_t k = 1; k < p.size(); ++k) r.push_back(Scalar(Rational(k)) * p[k]);
    return r;
}

UPoly u_gcd(UPoly a, UPoly b) {
    u_trim(a);
    u_trim(b);
    while (!b.empty()) {
        UPoly q, r;
        u_divrem(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && !a.back().is_one()) {
        Scalar lc = a.back();
        for (auto& c : a) c /= lc;
    }
    return a;
}

Expr linear_factor(const std::string& v, const Scalar& r) {
    if (r.is_zero()) return var(v);
    return sub(var(v), cnst(r));
}

// roots (with multiplicity) of a monic polynomial whose squarefree part has
// degree <= 2; nullopt when roots are not expressible in Q(i)
std::optional<std::vector<std::pair<Scalar, int>>> split_roots(const UPoly& d) {
    UPoly s_den = u_gcd(d, u_deriv(d));
    UPoly q, rem, sf;
    u_divrem(d, s_den, q, rem);
    sf = q;  // squarefree part
    std::vector<Scalar> roots;
    if (u_deg(sf) == 1) {
        roots.push_back(-sf[0] / sf[1]);
    } else if (u_deg(sf) == 2) {
        Scalar a = sf[2], b = sf[1], c = sf[0];
        Scalar disc = b * b - Scalar(4) * a * c;
        auto sq = disc.exact_sqrt();
        if (!sq) return std::nullopt;
        Scalar twoa = Scalar(2) * a;
        roots.push_back((-b + *sq) / twoa);
        if (!sq->is_zero()) roots.push_back((-b - *sq) / twoa);
    } else {
        return std::nullopt;
    }
    std::vector<std::pair<Scalar, int>> out;
    UPoly cur = d;
    for (const Scalar& r : roots) {
        int m = 0;
        while (true) {
            UPoly lf{-r, Scalar(1)}, qq, rr;
            u_divrem(cur, lf, qq, rr);
            if (!rr.empty()) break;
            cur = std::move(qq);
            ++m;
        }
        out.emplace_back(r, m);
    }
    if (u_deg(cur) != 0) return std::nullopt;  // repeated irrational roots
    return out;
}

// antiderivative of N/D, D monic with deg >= 1, Scalar coefficients
std::optional<Expr> integrate_rat(UPoly num, const UPoly& den, const std::string& v,
                                  bool allow_log) {
    std::vector<Expr> terms;
    UPoly q, rem;
    u_divrem(std::move(num), den, q, rem);
    for (size_t k = 0; k < q.size(); ++k) {
        if (q[k].is_zero()) continue;
        Scalar c = q[k] / Scalar(Rational(k + 1));
        terms.push_back(mul(cnst(c), pow(var(v), static_cast<int>(k + 1))));
    }
    if (!rem.empty()) {
        auto roots = split_roots(den);
        if (!roots) return std::nullopt;
        for (auto& [r, m] : *roots) {
            // D_j = D / (v-r)^m, then Taylor coefficients of rem/D_j at r
            UPoly dj = den;
            for (int k = 0; k < m; ++k) {
                UPoly lf{-r, Scalar(1)}, qq, rr;
                u_divrem(dj, lf, qq, rr);
                dj = std::move(qq);
            }
            // shift both to the origin: p(v+r) via Horner-style synthetic division
            auto shift = [&](UPoly p) {
                UPoly out;
                // repeatedly divide by (v - r); remainders are the Taylor coeffs
                while (!p.empty()) {
                    UPoly lf{-r, Scalar(1)}, qq, rr;
                    u_divrem(p, lf, qq, rr);
                    out.push_back(rr.empty() ? Scalar(0) : rr[0]);
                    p = std::move(qq);
                }
                return out;
            };
            UPoly rs = shift(rem), ds = shift(dj);
            // series inverse of ds up to order m
            std::vector<Scalar> inv(static_cast<size_t>(m), Scalar(0));
            inv[0] = Scalar(1) / ds[0];
            for (int n = 1; n < m; ++n) {
                Scalar s(0);
                for (int k = 1; k <= n; ++k) {
                    Scalar dk = static_cast<size_t>(k) < ds.size() ? ds[k] : Scalar(0);
                    s += dk * inv[static_cast<size_t>(n - k)];
                }
                inv[static_cast<size_t>(n)] = -s / ds[0];
            }
            for (int k = 1; k <= m; ++k) {
                // coefficient of 1/(v-r)^k is the (m-k)-th series coefficient
                Scalar a(0);
                for (int t = 0; t <= m - k; ++t) {
                    Scalar rc = static_cast<size_t>(t) < rs.size() ? rs[t] : Scalar(0);
                    a += rc * inv[static_cast<size_t>(m - k - t)];
                }
                if (a.is_zero()) continue;
                if (k == 1) {
                    if (!allow_log) return std::nullopt;
                    terms.push_back(mul(cnst(a), log(linear_factor(v, r))));
                } else {
                    Scalar c = -a / Scalar(Rational(k - 1));
                    terms.push_back(mul(cnst(c), pow(linear_factor(v, r), -(k - 1))));
                }
            }
        }
    }
    return add(std::move(terms));
}

// view a Poly whose atoms are only v as a dense UPoly; nullopt otherwise
std::optional<UPoly> to_upoly(const Poly& p, int vid) {
    UPoly out;
    for (auto& [m, c] : p) {
        int d = 0;
        if (m.size() == 1 && m[0].first == vid)
            d = m[0].second;
        else if (!m.empty())
            return std::nullopt;
        if (static_cast<size_t>(d) >= out.size()) out.resize(static_cast<size_t>(d) + 1, Scalar(0));
        out[static_cast<size_t>(d)] = c;
    }
    u_trim(out);
    return out;
}

bool atom_depends_on(int id, const std::string& v) {
    const detail::Atom& a = detail::atom_info(id);
    if (a.kind == detail::AtomKind::Var) return a.name == v;
    return depends_on(a.arg, v);
}

}  // namespace

std::optional<Expr> antiderivative(const Expr& e, const std::string& v, bool allow_log) {
    RF rf = detail::to_rf(e);
    if (detail::rf_is_zero(rf)) return zero();
    int vid = detail::intern_atom(detail::AtomKind::Var, v, nullptr);

    bool den_has_v = false;
    for (int id : detail::poly_atoms(rf.den))
        if (atom_depends_on(id, v)) den_has_v = true;

    if (den_has_v) {
        auto den = to_upoly(rf.den, vid);
        if (!den || u_deg(*den) < 1) return std::nullopt;
        // split the numerator by its v-free monomial part and integrate each
        // Scalar-coefficient slice against the common denominator
        std::map<detail::Monomial, UPoly, detail::MonoLess> groups;
        for (auto& [m, c] : rf.num) {
            int d = 0;
            detail::Monomial rest;
            for (auto& [id, ex] : m) {
                if (id == vid) {
                    d = ex;
                } else {
                    if (atom_depends_on(id, v)) return std::nullopt;
                    rest.emplace_back(id, ex);
                }
            }
            auto& up = groups[rest];
            if (static_cast<size_t>(d) >= up.size()) up.resize(static_cast<size_t>(d) + 1, Scalar(0));
            up[static_cast<size_t>(d)] += c;
        }
        std::vector<Expr> parts;
        for (auto& [rest, up] : groups) {
            UPoly n = up;
            u_trim(n);
            auto piece = integrate_rat(std::move(n), *den, v, allow_log);
            if (!piece) return std::nullopt;
            Poly restp;
            restp.emplace(rest, Scalar(1));
            parts.push_back(mul(detail::poly_to_expr(restp), *piece));
        }
        return normalize(add(std::move(parts)));
    }

    // v-free denominator: integrate the numerator termwise; monomials may carry
    // one exp factor whose argument is linear in v
    struct Group {
        Expr exp_arg;                 // null for the plain polynomial part
        Expr alpha;                   // d(exp_arg)/dv, v-free
        std::map<int, Poly> coeffs;   // v-degree -> v-free coefficient
    };
    std::map<int, Group> groups;  // keyed by exp atom id, -1 for none
    for (auto& [m, c] : rf.num) {
        int d = 0, key = -1;
        Expr exp_arg;
        detail::Monomial rest;
        for (auto& [id, ex] : m) {
            if (id == vid) {
                d = ex;
                continue;
            }
            if (!atom_depends_on(id, v)) {
                rest.emplace_back(id, ex);
                continue;
            }
            const detail::Atom& a = detail::atom_info(id);
            if (a.kind != detail::AtomKind::Exp || ex != 1) return std::nullopt;
            key = id;
            exp_arg = a.arg;
        }
        auto& g = groups[key];
        if (key >= 0 && !g.exp_arg) {
            Expr alpha = normalize(diff(exp_arg, v));
            if (depends_on(alpha, v) || is_zero_yes(alpha)) return std::nullopt;
            g.exp_arg = exp_arg;
            g.alpha = alpha;
        }
        Poly t;
        t.emplace(rest, c);
        g.coeffs[d] = detail::p_add(g.coeffs[d], t);
    }

    std::vector<Expr> parts;
    for (auto& [key, g] : groups) {
        if (key < 0) {
            for (auto& [d, cp] : g.coeffs) {
                if (detail::p_is_zero(cp)) continue;
                Expr c = detail::poly_to_expr(
                    detail::p_mul(cp, detail::p_const(Scalar(1) / Scalar(Rational(d + 1)))));
                parts.push_back(mul(c, pow(var(v), d + 1)));
            }
            continue;
        }
        // integrate P(v) exp(alpha v + ...) by parts:
        // exp * sum_k (-1)^k P^(k) / alpha^(k+1)
        int maxd = g.coeffs.empty() ? 0 : g.coeffs.rbegin()->first;
        std::vector<Poly> cur(static_cast<size_t>(maxd) + 1);
        for (auto& [d, cp] : g.coeffs) cur[static_cast<size_t>(d)] = cp;
        std::vector<Expr> qterms;
        Scalar sign(1);
        for (int k = 0; k <= maxd; ++k) {
            std::vector<Expr> pk;
            for (size_t d = 0; d < cur.size(); ++d) {
                if (detail::p_is_zero(cur[d])) continue;
                Expr c = detail::poly_to_expr(cur[d]);
                pk.push_back(d == 0 ? c : mul(c, pow(var(v), static_cast<int>(d))));
            }
            if (!pk.empty())
                qterms.push_back(mul({cnst(sign), add(std::move(pk)), pow(g.alpha, -(k + 1))}));
            // differentiate cur in v
            std::vector<Poly> nxt(cur.size());
            for (size_t d = 1; d < cur.size(); ++d)
                nxt[d - 1] = detail::p_mul(cur[d], detail::p_const(Scalar(Rational(d))));
            cur = std::move(nxt);
            sign = -sign;
        }
        parts.push_back(mul(exp(g.exp_arg), add(std::move(qterms))));
    }

    Expr total = add(std::move(parts));
    if (!(rf.den.size() == 1 && rf.den.begin()->first.empty() &&
          rf.den.begin()->second.is_one()))
        total = div(total, detail::poly_to_expr(rf.den));
    return normalize(total);
}

}  // namespace susyk::sym
