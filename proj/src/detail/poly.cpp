#include "detail/poly.hpp"

#include <algorithm>
#include <mutex>

namespace susyk::sym::detail {

// ---------------------------------------------------------------- atom table

namespace {

struct AtomTable {
    std::vector<Atom> atoms;
    std::map<std::string, int> by_key;
    std::mutex mu;
};

AtomTable& table() {
    static AtomTable t;
    return t;
}

std::string make_key(AtomKind kind, const std::string& name, const Expr& arg) {
    switch (kind) {
        case AtomKind::Var: return "v:" + name;
        case AtomKind::Exp: return "e:" + print(arg);
        case AtomKind::Log: return "l:" + print(arg);
        case AtomKind::Sqrt: return "s:" + print(arg);
        case AtomKind::Opaque: return "o:" + name + ":" + print(arg);
    }
    throw SymError("bad atom kind");
}

}  // namespace

int intern_atom(AtomKind kind, const std::string& name, const Expr& arg) {
    std::string key = make_key(kind, name, arg);
    auto& t = table();
    std::scoped_lock lk(t.mu);
    auto it = t.by_key.find(key);
    if (it != t.by_key.end()) return it->second;
    int id = static_cast<int>(t.atoms.size());
    t.atoms.push_back(Atom{kind, name, arg, key});
    t.by_key.emplace(std::move(key), id);
    return id;
}

const Atom& atom_info(int id) {
    auto& t = table();
    std::scoped_lock lk(t.mu);
    return t.atoms.at(static_cast<size_t>(id));
}

// ---------------------------------------------------------------- monomials

bool MonoLess::operator()(const Monomial& a, const Monomial& b) const {
    long da = 0, db = 0;
    for (auto& [id, e] : a) da += e;
    for (auto& [id, e] : b) db += e;
    if (da != db) return da < db;
    // lex on ascending atom ids; higher exponent on the earliest id is larger
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first != b[j].first) {
            // the monomial owning the smaller id is lex-larger
            return a[i].first > b[j].first;
        }
        if (a[i].second != b[j].second) return a[i].second < b[j].second;
        ++i, ++j;
    }
    return i == a.size() && j < b.size();
}

static Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first))
            r.push_back(a[i++]);
        else if (i == a.size() || b[j].first < a[i].first)
            r.push_back(b[j++]);
        else {
            r.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i, ++j;
        }
    }
    return r;
}

static bool mono_divides(const Monomial& d, const Monomial& m) {
    size_t j = 0;
    for (auto& [id, e] : d) {
        while (j < m.size() && m[j].first < id) ++j;
        if (j == m.size() || m[j].first != id || m[j].second < e) return false;
    }
    return true;
}

static Monomial mono_div(const Monomial& m, const Monomial& d) {
    Monomial r;
    size_t j = 0;
    for (auto& [id, e] : m) {
        int sub = 0;
        if (j < d.size() && d[j].first == id) sub = d[j++].second;
        if (e - sub > 0) r.emplace_back(id, e - sub);
    }
    return r;
}

// ---------------------------------------------------------------- basic ops

Poly p_const(const Scalar& c) {
    Poly p;
    if (!c.is_zero()) p.emplace(Monomial{}, c);
    return p;
}

Poly p_atom(int id) {
    Poly p;
    p.emplace(Monomial{{id, 1}}, Scalar(1));
    return p;
}

bool p_is_zero(const Poly& p) { return p.empty(); }

bool p_is_const(const Poly& p) {
    return p.empty() || (p.size() == 1 && p.begin()->first.empty());
}

Poly p_neg(const Poly& a) {
    Poly r;
    for (auto& [m, c] : a) r.emplace(m, -c);
    return r;
}

Poly p_add(const Poly& a, const Poly& b) {
    Poly r = a;
    for (auto& [m, c] : b) {
        auto [it, fresh] = r.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) r.erase(it);
        }
    }
    return r;
}

Poly p_sub(const Poly& a, const Poly& b) { return p_add(a, p_neg(b)); }

bool poly_has_atom_kind(const Poly& p, AtomKind k) {
    for (auto& [m, c] : p)
        for (auto& [id, e] : m)
            if (atom_info(id).kind == k) return true;
    return false;
}

std::vector<int> poly_atoms(const Poly& p) {
    std::vector<int> ids;
    for (auto& [m, c] : p)
        for (auto& [id, e] : m)
            if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

// ------------------------------------------------------- monomial rewrites

namespace {

bool mono_needs_rewrite(const Monomial& m) {
    int exps = 0;
    for (auto& [id, e] : m) {
        const Atom& a = atom_info(id);
        if (a.kind == AtomKind::Exp && (++exps > 1 || e != 1)) return true;
        if (a.kind == AtomKind::Sqrt && e >= 2) return true;
    }
    return false;
}

Poly p_mul_raw(const Poly& a, const Poly& b) {
    Poly r;
    for (auto& [ma, ca] : a)
        for (auto& [mb, cb] : b) {
            Scalar c = ca * cb;
            auto m = mono_mul(ma, mb);
            auto [it, fresh] = r.emplace(std::move(m), c);
            if (!fresh) {
                it->second += c;
                if (it->second.is_zero()) r.erase(it);
            }
        }
    return r;
}

// exp(a)^j * exp(b)^k -> exp(ja+kb); sqrt(P)^(2q+r) -> P^q * sqrt(P)^r.
Poly reduce_poly(const Poly& p);

Poly reduce_monomial(const Monomial& m, const Scalar& coeff) {
    Monomial kept;
    std::vector<Expr> exp_args;
    Poly extra = p_const(Scalar(1));
    for (auto& [id, e] : m) {
        const Atom& a = atom_info(id);
        if (a.kind == AtomKind::Exp) {
            exp_args.push_back(e == 1 ? a.arg : mul(cnst(Scalar(Rational(e))), a.arg));
        } else if (a.kind == AtomKind::Sqrt && e >= 2) {
            RF arg_rf = to_rf(a.arg);
            if (!p_is_const(arg_rf.den)) throw SymError("sqrt atom with non-polynomial arg");
            Poly arg_poly = arg_rf.num;
            if (!(arg_rf.den.begin()->second.is_one()))
                arg_poly = p_mul_raw(arg_poly, p_const(Scalar(1) / arg_rf.den.begin()->second));
            Poly pw = p_const(Scalar(1));
            for (int k = 0; k < e / 2; ++k) pw = p_mul_raw(pw, arg_poly);
            extra = p_mul_raw(extra, pw);
            if (e % 2) kept.emplace_back(id, 1);
        } else {
            kept.emplace_back(id, e);
        }
    }
    if (!exp_args.empty()) {
        Expr combined = normalize(exp_args.size() == 1 ? exp_args[0] : add(exp_args));
        RF crf = to_rf(combined);
        if (!rf_is_zero(crf)) {
            int id = intern_atom(AtomKind::Exp, "", combined);
            // insert in sorted position
            auto pos = std::lower_bound(kept.begin(), kept.end(), id,
                                        [](const auto& p, int v) { return p.first < v; });
            kept.insert(pos, {id, 1});
        }
    }
    Poly term;
    term.emplace(std::move(kept), coeff);
    Poly prod = p_mul_raw(term, extra);
    // squaring sqrt args may reintroduce reducible monomials
    for (auto& [mm, cc] : prod)
        if (mono_needs_rewrite(mm)) return reduce_poly(prod);
    return prod;
}

Poly reduce_poly(const Poly& p) {
    Poly r;
    for (auto& [m, c] : p) {
        if (!mono_needs_rewrite(m)) {
            auto [it, fresh] = r.emplace(m, c);
            if (!fresh) {
                it->second += c;
                if (it->second.is_zero()) r.erase(it);
            }
        } else {
            r = p_add(r, reduce_monomial(m, c));
        }
    }
    return r;
}

}  // namespace

Poly p_mul(const Poly& a, const Poly& b) {
    Poly raw = p_mul_raw(a, b);
    for (auto& [m, c] : raw)
        if (mono_needs_rewrite(m)) return reduce_poly(raw);
    return raw;
}

Poly p_pow(const Poly& a, unsigned n) {
    Poly r = p_const(Scalar(1));
    Poly base = a;
    while (n) {
        if (n & 1u) r = p_mul(r, base);
        base = p_mul(base, base);
        n >>= 1u;
    }
    return r;
}

// ---------------------------------------------------------------- division

Poly p_divexact(const Poly& a, const Poly& b) {
    if (p_is_zero(b)) throw SymError("p_divexact: division by zero polynomial");
    Poly r = a, q;
    auto lead_b = *b.rbegin();
    while (!r.empty()) {
        auto lead_r = *r.rbegin();
        if (!mono_divides(lead_b.first, lead_r.first))
            throw SymError("p_divexact: not divisible");
        Monomial qm = mono_div(lead_r.first, lead_b.first);
        Scalar qc = lead_r.second / lead_b.second;
        Poly t;
        t.emplace(std::move(qm), qc);
        q = p_add(q, t);
        r = p_sub(r, p_mul_raw(t, b));
    }
    return q;
}

// ---------------------------------------------------------------- gcd (PRS)

namespace {

int main_var(const Poly& p) {
    int v = -1;
    for (auto& [m, c] : p)
        for (auto& [id, e] : m) v = std::max(v, id);
    return v;
}

int deg_in(const Poly& p, int v) {
    int d = 0;
    for (auto& [m, c] : p)
        for (auto& [id, e] : m)
            if (id == v) d = std::max(d, e);
    return d;
}

// coefficients of p viewed as univariate in v
std::map<int, Poly> univ(const Poly& p, int v) {
    std::map<int, Poly> r;
    for (auto& [m, c] : p) {
        int d = 0;
        Monomial rest;
        for (auto& [id, e] : m) {
            if (id == v)
                d = e;
            else
                rest.emplace_back(id, e);
        }
        auto [it, fresh] = r[d].emplace(std::move(rest), c);
        if (!fresh) it->second += c;
    }
    for (auto& [d, poly] : r)
        for (auto it = poly.begin(); it != poly.end();)
            it = it->second.is_zero() ? poly.erase(it) : std::next(it);
    for (auto it = r.begin(); it != r.end();)
        it = p_is_zero(it->second) ? r.erase(it) : std::next(it);
    return r;
}

Poly content_in(const Poly& p, int v) {
    auto coeffs = univ(p, v);
    Poly g;
    for (auto& [d, c] : coeffs) g = p_gcd(g, c);
    return g;
}

// pseudo-remainder of a by b in variable v
Poly prem(const Poly& a, const Poly& b, int v) {
    int db = deg_in(b, v);
    auto bu = univ(b, v);
    Poly lb = bu.rbegin()->second;
    Poly r = a;
    int dr = deg_in(r, v);
    while (!p_is_zero(r) && dr >= db) {
        auto ru = univ(r, v);
        if (ru.rbegin()->first < db) break;
        Poly lr = ru.rbegin()->second;
        Poly vshift = dr - db == 0 ? p_const(Scalar(1))
                                   : Poly{{Monomial{{v, dr - db}}, Scalar(1)}};
        r = p_sub(p_mul_raw(r, lb), p_mul_raw(p_mul_raw(lr, vshift), b));
        int dr2 = deg_in(r, v);
        if (dr2 == dr && !p_is_zero(r)) throw SymError("prem: no degree drop");
        dr = dr2;
    }
    return r;
}

// scale so the leading coefficient (graded lex) is 1
Poly p_monic(Poly p) {
    if (p.empty()) return p;
    Scalar lc = p.rbegin()->second;
    if (lc.is_one()) return p;
    for (auto& [m, c] : p) c /= lc;
    return p;
}

}  // namespace

Poly p_gcd(Poly a, Poly b) {
    if (p_is_zero(a)) return p_monic(b);
    if (p_is_zero(b)) return p_monic(a);
    if (p_is_const(a) || p_is_const(b)) return p_const(Scalar(1));
    int v = std::max(main_var(a), main_var(b));
    int da = deg_in(a, v), db = deg_in(b, v);
    if (da == 0 && db == 0) {
        // v not actually present (can't happen with main_var), fall through
        return p_const(Scalar(1));
    }
    if (da == 0) return p_monic(p_gcd(a, content_in(b, v)));
    if (db == 0) return p_monic(p_gcd(content_in(a, v), b));
    Poly ca = content_in(a, v), cb = content_in(b, v);
    Poly g = p_gcd(ca, cb);
    Poly pa = p_divexact(a, ca), pb = p_divexact(b, cb);
    if (deg_in(pa, v) < deg_in(pb, v)) std::swap(pa, pb);
    while (true) {
        Poly r = prem(pa, pb, v);
        if (p_is_zero(r)) break;
        if (deg_in(r, v) == 0) return p_monic(g);  // coprime in v
        pa = std::move(pb);
        pb = p_divexact(r, content_in(r, v));
    }
    return p_monic(p_mul(g, p_divexact(pb, content_in(pb, v))));
}

// ---------------------------------------------------------------- RF

RF rf_const(const Scalar& c) { return RF{p_const(c), p_const(Scalar(1))}; }

bool rf_is_zero(const RF& a) { return p_is_zero(a.num); }

namespace {

// factor exp atoms and globally-common sqrt atoms out of the denominator
void clean_denominator(Poly& num, Poly& den) {
    // exp atoms common to every denominator monomial, with min exponent
    for (bool changed = true; changed;) {
        changed = false;
        std::map<int, int> common;  // atom id -> min exponent over all monomials
        bool first = true;
        for (auto& [m, c] : den) {
            std::map<int, int> cur;
            for (auto& [id, e] : m) {
                AtomKind k = atom_info(id).kind;
                if (k == AtomKind::Exp || k == AtomKind::Sqrt) cur[id] = e;
            }
            if (first) {
                common = cur;
                first = false;
            } else {
                for (auto it = common.begin(); it != common.end();) {
                    auto f = cur.find(it->first);
                    if (f == cur.end()) {
                        it = common.erase(it);
                    } else {
                        it->second = std::min(it->second, f->second);
                        ++it;
                    }
                }
            }
            if (common.empty()) break;
        }
        for (auto& [id, e] : common) {
            const Atom& a = atom_info(id);
            Monomial f{{id, e}};
            Poly nden;
            for (auto& [m, c] : den) nden.emplace(mono_div(m, f), c);
            den = std::move(nden);
            if (a.kind == AtomKind::Exp) {
                Expr negarg = normalize(mul(cnst(Scalar(Rational(-e))), a.arg));
                int nid = intern_atom(AtomKind::Exp, "", negarg);
                num = p_mul(num, p_atom(nid));
            } else {
                // 1/sqrt(P)^e = sqrt(P)^e / P^e
                Poly s = p_pow(p_atom(id), static_cast<unsigned>(e));
                num = p_mul(num, s);
                RF arg_rf = to_rf(a.arg);
                Poly ap = arg_rf.num;  // sqrt args are polynomial
                for (int k = 0; k < e; ++k) den = p_mul(den, ap);
            }
            changed = true;
        }
    }
}

}  // namespace

RF rf_make(Poly num, Poly den) {
    if (p_is_zero(den)) throw SymError("division by zero expression");
    if (p_is_zero(num)) return RF{Poly{}, p_const(Scalar(1))};
    clean_denominator(num, den);
    Poly g = p_gcd(num, den);
    if (!p_is_const(g) || (!g.empty() && !g.rbegin()->second.is_one())) {
        num = p_divexact(num, g);
        den = p_divexact(den, g);
    }
    Scalar lc = den.rbegin()->second;
    if (!lc.is_one()) {
        for (auto& [m, c] : num) c /= lc;
        Poly nden;
        for (auto& [m, c] : den) nden.emplace(m, c / lc);
        den = std::move(nden);
    }
    return RF{std::move(num), std::move(den)};
}

RF rf_add(const RF& a, const RF& b) {
    return rf_make(p_add(p_mul(a.num, b.den), p_mul(b.num, a.den)), p_mul(a.den, b.den));
}

RF rf_sub(const RF& a, const RF& b) { return rf_add(a, rf_neg(b)); }

RF rf_neg(const RF& a) { return RF{p_neg(a.num), a.den}; }

RF rf_mul(const RF& a, const RF& b) {
    return rf_make(p_mul(a.num, b.num), p_mul(a.den, b.den));
}

RF rf_div(const RF& a, const RF& b) {
    if (rf_is_zero(b)) throw SymError("division by zero expression");
    return rf_make(p_mul(a.num, b.den), p_mul(a.den, b.num));
}

RF rf_pow(const RF& a, int n) {
    if (n == 0) return rf_const(Scalar(1));
    unsigned m = static_cast<unsigned>(n < 0 ? -n : n);
    RF r = RF{p_pow(a.num, m), p_pow(a.den, m)};
    if (n < 0) r = rf_make(std::move(r.den), std::move(r.num));
    else r = rf_make(std::move(r.num), std::move(r.den));
    return r;
}

// ---------------------------------------------------------------- to_rf

RF to_rf(const Expr& e) {
    switch (e->kind) {
        case Kind::Const:
            return rf_const(e->value);
        case Kind::Var:
            return RF{p_atom(intern_atom(AtomKind::Var, e->name, nullptr)), p_const(Scalar(1))};
        case Kind::Add: {
            RF r = rf_const(Scalar(0));
            for (auto& t : e->args) r = rf_add(r, to_rf(t));
            return r;
        }
        case Kind::Mul: {
            RF r = rf_const(Scalar(1));
            for (auto& t : e->args) r = rf_mul(r, to_rf(t));
            return r;
        }
        case Kind::Pow:
            return rf_pow(to_rf(e->args[0]), e->ipow);
        case Kind::Div:
            return rf_div(to_rf(e->args[0]), to_rf(e->args[1]));
        case Kind::Exp: {
            Expr a = normalize(e->args[0]);
            if (a->kind == Kind::Const && a->value.is_zero()) return rf_const(Scalar(1));
            return RF{p_atom(intern_atom(AtomKind::Exp, "", a)), p_const(Scalar(1))};
        }
        case Kind::Log: {
            Expr a = normalize(e->args[0]);
            if (a->kind == Kind::Const) {
                if (a->value.is_zero()) throw SymError("log of zero expression");
                if (a->value.is_one()) return rf_const(Scalar(0));
            }
            return RF{p_atom(intern_atom(AtomKind::Log, "", a)), p_const(Scalar(1))};
        }
        case Kind::Sqrt: {
            Expr a = normalize(e->args[0]);
            if (a->kind == Kind::Const) {
                if (a->value.is_zero()) return rf_const(Scalar(0));
                if (auto s = a->value.exact_sqrt()) return rf_const(*s);
            }
            // sqrt(p/q) stored as sqrt(p*q)/q so sqrt args stay polynomial
            RF arf = to_rf(a);
            if (rf_is_zero(arf)) return rf_const(Scalar(0));
            if (!p_is_const(arf.den)) {
                Poly pq = p_mul(arf.num, arf.den);
                Expr parg = normalize(poly_to_expr(pq));
                int id = intern_atom(AtomKind::Sqrt, "", parg);
                return rf_make(p_atom(id), arf.den);
            }
            Expr na = rf_to_expr(arf);
            return RF{p_atom(intern_atom(AtomKind::Sqrt, "", na)), p_const(Scalar(1))};
        }
        case Kind::Opaque: {
            Expr a = normalize(e->args[0]);
            return RF{p_atom(intern_atom(AtomKind::Opaque, e->name, a)), p_const(Scalar(1))};
        }
    }
    throw SymError("to_rf: bad expression node");
}

// ---------------------------------------------------------------- rebuild

namespace {

Expr atom_to_expr(int id) {
    const Atom& a = atom_info(id);
    switch (a.kind) {
        case AtomKind::Var: return var(a.name);
        case AtomKind::Exp: return sym::exp(a.arg);
        case AtomKind::Log: return sym::log(a.arg);
        case AtomKind::Sqrt: return sym::sqrt(a.arg);
        case AtomKind::Opaque: return opaque(a.name, a.arg);
    }
    throw SymError("bad atom");
}

Expr term_to_expr(const Monomial& m, const Scalar& c) {
    std::vector<Expr> factors;
    if (!c.is_one() || m.empty()) factors.push_back(cnst(c));
    for (auto& [id, e] : m) {
        Expr a = atom_to_expr(id);
        factors.push_back(e == 1 ? a : pow(a, e));
    }
    return factors.size() == 1 ? factors[0] : mul(std::move(factors));
}

}  // namespace

Expr poly_to_expr(const Poly& p) {
    if (p.empty()) return cnst(0);
    std::vector<Expr> terms;
    // highest monomial first for readable output
    for (auto it = p.rbegin(); it != p.rend(); ++it) terms.push_back(term_to_expr(it->first, it->second));
    return terms.size() == 1 ? terms[0] : add(std::move(terms));
}

Expr rf_to_expr(const RF& rf) {
    Expr n = poly_to_expr(rf.num);
    if (rf.den.size() == 1 && rf.den.begin()->first.empty() && rf.den.begin()->second.is_one())
        return n;
    return div(n, poly_to_expr(rf.den));
}

}  // namespace susyk::sym::detail
