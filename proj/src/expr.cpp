#include "susykern/expr.hpp"

#include "detail/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <mutex>
#include <random>
#include <set>
#include <sstream>

namespace susyk::sym {

// ---------------------------------------------------------------- builders

namespace {

Expr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

}  // namespace

Expr cnst(Scalar v) { return make({Kind::Const, std::move(v), "", {}, 0}); }
Expr cnst(long v) { return cnst(Scalar(v)); }
Expr var(std::string name) { return make({Kind::Var, Scalar(0), std::move(name), {}, 0}); }

Expr add(std::vector<Expr> terms) {
    if (terms.empty()) return zero();
    if (terms.size() == 1) return terms[0];
    return make({Kind::Add, Scalar(0), "", std::move(terms), 0});
}
Expr add(Expr a, Expr b) { return add(std::vector<Expr>{std::move(a), std::move(b)}); }
Expr neg(Expr a) { return mul(cnst(-1), std::move(a)); }
Expr sub(Expr a, Expr b) { return add(std::move(a), neg(std::move(b))); }

Expr mul(std::vector<Expr> factors) {
    if (factors.empty()) return one();
    if (factors.size() == 1) return factors[0];
    return make({Kind::Mul, Scalar(0), "", std::move(factors), 0});
}
Expr mul(Expr a, Expr b) { return mul(std::vector<Expr>{std::move(a), std::move(b)}); }

Expr pow(Expr base, int n) {
    if (n == 1) return base;
    return make({Kind::Pow, Scalar(0), "", {std::move(base)}, n});
}
Expr div(Expr num, Expr den) {
    return make({Kind::Div, Scalar(0), "", {std::move(num), std::move(den)}, 0});
}
Expr exp(Expr a) { return make({Kind::Exp, Scalar(0), "", {std::move(a)}, 0}); }
Expr log(Expr a) { return make({Kind::Log, Scalar(0), "", {std::move(a)}, 0}); }
Expr sqrt(Expr a) { return make({Kind::Sqrt, Scalar(0), "", {std::move(a)}, 0}); }

Expr opaque(std::string name, Expr arg) {
    if (!opaque_registered(name))
        throw SymError("opaque symbol '" + name + "' not registered");
    return make({Kind::Opaque, Scalar(0), std::move(name), {std::move(arg)}, 0});
}

// ---------------------------------------------------------------- registry

namespace {

struct OpaqueRegistry {
    std::map<std::string, DerivRule> rules;
    std::mutex mu;
};

OpaqueRegistry& registry() {
    static OpaqueRegistry* r = [] {
        auto* reg = new OpaqueRegistry;
        // Weierstrass symbols are pre-registered; wp_prime is terminal here,
        // its numeric derivative lives in the elliptic module.
        reg->rules["wp_prime"] = nullptr;
        reg->rules["wp"] = [](const Expr& u) { return opaque("wp_prime", u); };
        return reg;
    }();
    return *r;
}

}  // namespace

void register_opaque(const std::string& name, const std::string& derivative_name) {
    auto& r = registry();
    std::scoped_lock lk(r.mu);
    if (!r.rules.count(derivative_name)) r.rules[derivative_name] = nullptr;
    std::string dn = derivative_name;
    r.rules[name] = [dn](const Expr& u) { return opaque(dn, u); };
}

void register_opaque(const std::string& name, DerivRule rule) {
    auto& r = registry();
    std::scoped_lock lk(r.mu);
    r.rules[name] = std::move(rule);
}

bool opaque_registered(const std::string& name) {
    auto& r = registry();
    std::scoped_lock lk(r.mu);
    return r.rules.count(name) > 0;
}

static DerivRule opaque_rule(const std::string& name) {
    auto& r = registry();
    std::scoped_lock lk(r.mu);
    auto it = r.rules.find(name);
    if (it == r.rules.end() || !it->second)
        throw SymError("no derivative rule for opaque '" + name + "'");
    return it->second;
}

// ---------------------------------------------------------------- registry of vars

VarRegistry::VarRegistry(std::vector<std::string> names) : names_(std::move(names)) {}

void VarRegistry::add(const std::string& name) {
    if (!has(name)) names_.push_back(name);
}

bool VarRegistry::has(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

// ---------------------------------------------------------------- printing

namespace {

// precedence: 1 add, 2 mul/div, 3 pow, 4 atom
int prec_of(const Expr& e) {
    switch (e->kind) {
        case Kind::Const: {
            const Scalar& v = e->value;
            if (v.is_real() && v.re() >= 0) return 4;
            if (v.re() == 0 && v.im() == 1) return 4;
            return 1;  // needs parens inside products/powers
        }
        case Kind::Var:
        case Kind::Exp:
        case Kind::Log:
        case Kind::Sqrt:
        case Kind::Opaque:
            return 4;
        case Kind::Add: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Pow: return 3;
    }
    return 4;
}

std::string print_at(const Expr& e, int context);

std::string print_node(const Expr& e) {
    switch (e->kind) {
        case Kind::Const: return e->value.str();
        case Kind::Var: return e->name;
        case Kind::Add: {
            std::string s;
            for (size_t i = 0; i < e->args.size(); ++i) {
                std::string t = print_at(e->args[i], 1);
                if (i == 0)
                    s = t;
                else if (!t.empty() && t[0] == '-')
                    s += t;
                else
                    s += "+" + t;
            }
            return s;
        }
        case Kind::Mul: {
            std::string s;
            for (size_t i = 0; i < e->args.size(); ++i) {
                if (i) s += "*";
                s += print_at(e->args[i], 2);
            }
            return s;
        }
        case Kind::Div:
            return print_at(e->args[0], 2) + "/" + print_at(e->args[1], 3);
        case Kind::Pow:
            return print_at(e->args[0], 4) + "^" + std::to_string(e->ipow);
        case Kind::Exp: return "exp(" + print_at(e->args[0], 0) + ")";
        case Kind::Log: return "log(" + print_at(e->args[0], 0) + ")";
        case Kind::Sqrt: return "sqrt(" + print_at(e->args[0], 0) + ")";
        case Kind::Opaque: return e->name + "(" + print_at(e->args[0], 0) + ")";
    }
    throw SymError("print: bad node");
}

std::string print_at(const Expr& e, int context) {
    std::string s = print_node(e);
    if (prec_of(e) < context) return "(" + s + ")";
    // a leading minus inside a sum position is fine, but "x^-2" needs no parens
    return s;
}

}  // namespace

std::string print(const Expr& e) { return print_at(e, 0); }

// ---------------------------------------------------------------- parsing

namespace {

struct Token {
    enum T { Num, Ident, Op, End } type;
    std::string text;
    Rational num;
    size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            BigInt ip = 0;
            for (size_t k = i; k < j; ++k) ip = ip * 10 + (s[k] - '0');
            Rational r(ip);
            if (j < s.size() && s[j] == '.') {
                size_t k = j + 1;
                BigInt fp = 0, den = 1;
                while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
                    fp = fp * 10 + (s[k] - '0');
                    den *= 10;
                    ++k;
                }
                if (den == 1) throw ParseError("malformed number", j);
                r += Rational(fp, den);
                j = k;
            }
            out.push_back({Token::Num, s.substr(i, j - i), r, i});
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            out.push_back({Token::Ident, s.substr(i, j - i), 0, i});
            i = j;
            continue;
        }
        if (std::string("+-*/^(),").find(c) != std::string::npos) {
            out.push_back({Token::Op, std::string(1, c), 0, i});
            ++i;
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back({Token::End, "", 0, s.size()});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> toks, const VarRegistry& reg)
        : toks_(std::move(toks)), reg_(reg) {}

    Expr parse_all() {
        Expr e = parse_expr();
        if (cur().type != Token::End) throw ParseError("trailing input", cur().pos);
        return e;
    }

private:
    const Token& cur() const { return toks_[k_]; }
    bool eat_op(const std::string& o) {
        if (cur().type == Token::Op && cur().text == o) {
            ++k_;
            return true;
        }
        return false;
    }

    Expr parse_expr() {
        Expr e = parse_term();
        while (true) {
            if (eat_op("+"))
                e = add(e, parse_term());
            else if (eat_op("-"))
                e = sub(e, parse_term());
            else
                return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_factor();
        while (true) {
            if (eat_op("*"))
                e = mul(e, parse_factor());
            else if (eat_op("/"))
                e = div(e, parse_factor());
            else
                return e;
        }
    }

    Expr parse_factor() {
        Expr b = parse_base();
        if (eat_op("^")) {
            bool negexp = eat_op("-");
            if (cur().type != Token::Num || denominator(cur().num) != 1)
                throw ParseError("integer exponent expected", cur().pos);
            long n = static_cast<long>(numerator(cur().num));
            ++k_;
            return pow(b, static_cast<int>(negexp ? -n : n));
        }
        return b;
    }

    Expr parse_base() {
        if (cur().type == Token::Num) {
            Expr e = cnst(Scalar(cur().num));
            ++k_;
            return e;
        }
        if (eat_op("-")) return neg(parse_factor());
        if (eat_op("(")) {
            Expr e = parse_expr();
            if (!eat_op(")")) throw ParseError("expected ')'", cur().pos);
            return e;
        }
        if (cur().type == Token::Ident) {
            std::string name = cur().text;
            size_t pos = cur().pos;
            ++k_;
            if (eat_op("(")) {
                Expr arg = parse_expr();
                if (!eat_op(")")) throw ParseError("expected ')'", cur().pos);
                if (name == "exp") return exp(arg);
                if (name == "log") return log(arg);
                if (name == "sqrt") return sqrt(arg);
                if (opaque_registered(name)) return opaque(name, arg);
                throw ParseError("unknown function '" + name + "'", pos);
            }
            if (name == "i") return cnst(Scalar::i());
            if (reg_.has(name)) return var(name);
            throw ParseError("unknown identifier '" + name + "'", pos);
        }
        throw ParseError("unexpected token", cur().pos);
    }

    std::vector<Token> toks_;
    const VarRegistry& reg_;
    size_t k_ = 0;
};

}  // namespace

Expr parse(const std::string& text, const VarRegistry& registry) {
    return Parser(tokenize(text), registry).parse_all();
}

// ---------------------------------------------------------------- diff

Expr diff(const Expr& e, const std::string& v) {
    switch (e->kind) {
        case Kind::Const: return zero();
        case Kind::Var: return e->name == v ? one() : zero();
        case Kind::Add: {
            std::vector<Expr> d;
            for (auto& a : e->args) d.push_back(diff(a, v));
            return add(std::move(d));
        }
        case Kind::Mul: {
            std::vector<Expr> terms;
            for (size_t i = 0; i < e->args.size(); ++i) {
                std::vector<Expr> f = e->args;
                f[i] = diff(e->args[i], v);
                terms.push_back(mul(std::move(f)));
            }
            return add(std::move(terms));
        }
        case Kind::Pow: {
            const Expr& b = e->args[0];
            return mul({cnst(e->ipow), pow(b, e->ipow - 1), diff(b, v)});
        }
        case Kind::Div: {
            const Expr& a = e->args[0];
            const Expr& b = e->args[1];
            return div(sub(mul(diff(a, v), b), mul(a, diff(b, v))), pow(b, 2));
        }
        case Kind::Exp: return mul(exp(e->args[0]), diff(e->args[0], v));
        case Kind::Log: return div(diff(e->args[0], v), e->args[0]);
        case Kind::Sqrt: return div(diff(e->args[0], v), mul(cnst(2), sqrt(e->args[0])));
        case Kind::Opaque:
            return mul(opaque_rule(e->name)(e->args[0]), diff(e->args[0], v));
    }
    throw SymError("diff: bad node");
}

// ---------------------------------------------------------------- normalize & co

Expr normalize(const Expr& e) { return detail::rf_to_expr(detail::to_rf(e)); }

namespace {

void collect_vars(const Expr& e, std::set<std::string>& out) {
    if (e->kind == Kind::Var) out.insert(e->name);
    for (auto& a : e->args) collect_vars(a, out);
}

}  // namespace

std::vector<std::string> free_vars(const Expr& e) {
    std::set<std::string> s;
    collect_vars(e, s);
    return {s.begin(), s.end()};
}

bool depends_on(const Expr& e, const std::string& v) {
    if (e->kind == Kind::Var) return e->name == v;
    for (auto& a : e->args)
        if (depends_on(a, v)) return true;
    return false;
}

ZeroResult is_zero(const Expr& e) {
    detail::RF rf = detail::to_rf(e);
    if (detail::rf_is_zero(rf)) return {Tri::Yes, {}};
    bool analytic = false;
    for (int id : detail::poly_atoms(rf.num)) {
        auto k = detail::atom_info(id).kind;
        if (k == detail::AtomKind::Opaque) return {Tri::Unknown, {}};
        if (k != detail::AtomKind::Var) analytic = true;
    }
    // also look inside analytic arguments for opaques
    if (analytic) {
        Expr n = detail::rf_to_expr(rf);
        std::function<bool(const Expr&)> has_opaque = [&](const Expr& x) {
            if (x->kind == Kind::Opaque) return true;
            for (auto& a : x->args)
                if (has_opaque(a)) return true;
            return false;
        };
        if (has_opaque(n)) return {Tri::Unknown, {}};
    }
    if (!analytic) return {Tri::No, {}};  // nonzero rational function

    // numeric probing at 16 annulus points
    auto vars = free_vars(e);
    std::mt19937_64 rng(0x5059u);
    auto unif = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 16; ++trial) {
        EvalEnv env;
        for (auto& v : vars) {
            double r = unif(0.5, 2.0), th = unif(0.0, 6.283185307179586);
            env[v] = std::polar(r, th);
        }
        if (trial == 0)
            for (auto& v : vars) env[v] = {1.0, 0.0};  // z=1 first, a friendly witness
        try {
            auto val = eval(e, env, {});
            if (std::abs(val) > 1e-8) return {Tri::No, env};
        } catch (const SymError&) {
            continue;  // pole or branch trouble at this sample
        }
    }
    return {Tri::Unknown, {}};
}

bool is_zero_yes(const Expr& e) { return is_zero(e).verdict == Tri::Yes; }

bool equal(const Expr& a, const Expr& b) { return is_zero_yes(sub(a, b)); }

// ---------------------------------------------------------------- eval

std::complex<double> eval(const Expr& e, const EvalEnv& env, const EvalHooks& hooks) {
    using C = std::complex<double>;
    switch (e->kind) {
        case Kind::Const: return e->value.to_complex();
        case Kind::Var: {
            auto it = env.find(e->name);
            if (it == env.end()) throw SymError("unbound variable '" + e->name + "'");
            return it->second;
        }
        case Kind::Add: {
            C s = 0;
            for (auto& a : e->args) s += eval(a, env, hooks);
            return s;
        }
        case Kind::Mul: {
            C s = 1;
            for (auto& a : e->args) s *= eval(a, env, hooks);
            return s;
        }
        case Kind::Pow: {
            C b = eval(e->args[0], env, hooks);
            int n = e->ipow;
            if (n < 0) {
                if (std::abs(b) < 1e-300) throw SymError("pole in evaluation");
                b = 1.0 / b;
                n = -n;
            }
            C r = 1;
            while (n) {
                if (n & 1) r *= b;
                b *= b;
                n >>= 1;
            }
            return r;
        }
        case Kind::Div: {
            C d = eval(e->args[1], env, hooks);
            if (std::abs(d) < 1e-300) throw SymError("pole in evaluation");
            return eval(e->args[0], env, hooks) / d;
        }
        case Kind::Exp: return std::exp(eval(e->args[0], env, hooks));
        case Kind::Log: {
            C a = eval(e->args[0], env, hooks);
            if (std::abs(a) < 1e-300) throw SymError("log of ~0 in evaluation");
            return std::log(a);
        }
        case Kind::Sqrt: return std::sqrt(eval(e->args[0], env, hooks));
        case Kind::Opaque: {
            auto it = hooks.find(e->name);
            if (it == hooks.end()) throw SymError("unhooked opaque '" + e->name + "'");
            return it->second(eval(e->args[0], env, hooks));
        }
    }
    throw SymError("eval: bad node");
}

// ---------------------------------------------------------------- helpers

Expr substitute(const Expr& e, const std::map<std::string, Expr>& repl) {
    std::function<Expr(const Expr&)> go = [&](const Expr& x) -> Expr {
        switch (x->kind) {
            case Kind::Const: return x;
            case Kind::Var: {
                auto it = repl.find(x->name);
                return it == repl.end() ? x : it->second;
            }
            default: {
                std::vector<Expr> args;
                for (auto& a : x->args) args.push_back(go(a));
                ExprNode n{x->kind, x->value, x->name, std::move(args), x->ipow};
                return std::make_shared<const ExprNode>(std::move(n));
            }
        }
    };
    return normalize(go(e));
}

std::optional<std::pair<Scalar, int>> as_laurent_monomial(const Expr& e, const std::string& v) {
    detail::RF rf = detail::to_rf(e);
    if (detail::rf_is_zero(rf)) return std::nullopt;
    if (rf.num.size() != 1 || rf.den.size() != 1) return std::nullopt;
    auto check = [&](const detail::Monomial& m) -> std::optional<int> {
        if (m.empty()) return 0;
        if (m.size() != 1) return std::nullopt;
        const auto& a = detail::atom_info(m[0].first);
        if (a.kind != detail::AtomKind::Var || a.name != v) return std::nullopt;
        return m[0].second;
    };
    auto dn = check(rf.num.begin()->first);
    auto dd = check(rf.den.begin()->first);
    if (!dn || !dd) return std::nullopt;
    Scalar c = rf.num.begin()->second / rf.den.begin()->second;
    return std::make_pair(c, *dn - *dd);
}

std::optional<Scalar> as_constant(const Expr& e) {
    detail::RF rf = detail::to_rf(e);
    if (detail::rf_is_zero(rf)) return Scalar(0);
    if (rf.num.size() == 1 && rf.num.begin()->first.empty() && rf.den.size() == 1 &&
        rf.den.begin()->first.empty())
        return rf.num.begin()->second / rf.den.begin()->second;
    return std::nullopt;
}

bool is_unit(const Expr& e) {
    detail::RF rf = detail::to_rf(e);
    if (detail::rf_is_zero(rf)) return false;
    for (auto& p : {rf.num, rf.den})
        for (int id : detail::poly_atoms(p)) {
            auto k = detail::atom_info(id).kind;
            if (k == detail::AtomKind::Opaque)
                throw SymError("is_unit: opaque symbols unsupported");
            if (k == detail::AtomKind::Log || k == detail::AtomKind::Sqrt) return false;
        }
    // nonzero rational function, possibly times exp factors: a unit on the
    // localized chart domain
    return true;
}

}  // namespace susyk::sym
