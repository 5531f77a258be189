#include "susykern/superfn.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <sstream>

namespace susyk::sfn {

using sym::Expr;

// ---------------------------------------------------------------- ChartSpec

int ChartSpec::odd_index(const std::string& name) const {
    for (size_t i = 0; i < odds.size(); ++i)
        if (odds[i] == name) return static_cast<int>(i);
    return -1;
}

bool ChartSpec::has_even(const std::string& name) const {
    return std::find(evens.begin(), evens.end(), name) != evens.end();
}

bool ChartSpec::is_coordinate(const std::string& name) const {
    return has_even(name) || odd_index(name) >= 0;
}

// ---------------------------------------------------------------- basics

SuperFunction::SuperFunction(ChartSpec chart) : chart_(std::move(chart)) {
    if (chart_.odds.size() > 8) throw SymError("too many odd coordinates");
}

SuperFunction SuperFunction::from_expr(ChartSpec chart, Expr even_part) {
    SuperFunction r(std::move(chart));
    r.set(0, std::move(even_part));
    return r;
}

SuperFunction SuperFunction::constant(ChartSpec chart, Scalar c) {
    return from_expr(std::move(chart), sym::cnst(std::move(c)));
}

SuperFunction SuperFunction::coordinate(ChartSpec chart, const std::string& name) {
    SuperFunction r(chart);
    if (chart.has_even(name)) {
        r.set(0, sym::var(name));
    } else {
        int j = chart.odd_index(name);
        if (j < 0) throw SymError("not a coordinate: " + name);
        r.set(1u << j, sym::one());
    }
    return r;
}

Expr SuperFunction::coeff(unsigned mask) const {
    auto it = terms_.find(mask);
    return it == terms_.end() ? sym::zero() : it->second;
}

void SuperFunction::set(unsigned mask, Expr e) {
    Expr n = sym::normalize(std::move(e));
    if (sym::is_zero_yes(n))
        terms_.erase(mask);
    else
        terms_[mask] = std::move(n);
}

bool SuperFunction::is_zero() const {
    for (auto& [m, e] : terms_)
        if (!sym::is_zero_yes(e)) return false;
    return true;
}

std::optional<int> SuperFunction::parity() const {
    std::optional<int> p;
    for (auto& [m, e] : terms_) {
        if (sym::is_zero_yes(e)) continue;
        int q = std::popcount(m) & 1;
        if (p && *p != q) return std::nullopt;
        p = q;
    }
    return p ? p : std::optional<int>(0);
}

SuperFunction SuperFunction::operator-() const {
    SuperFunction r(chart_);
    for (auto& [m, e] : terms_) r.set(m, sym::neg(e));
    return r;
}

SuperFunction SuperFunction::operator+(const SuperFunction& o) const {
    if (chart_ != o.chart_) throw SymError("chart mismatch");
    SuperFunction r = *this;
    for (auto& [m, e] : o.terms_) r.set(m, sym::add(r.coeff(m), e));
    return r;
}

SuperFunction SuperFunction::operator-(const SuperFunction& o) const { return *this + (-o); }

namespace {

int merge_sign(unsigned a, unsigned b) {
    int inv = 0;
    while (b) {
        unsigned lb = b & (~b + 1u);
        inv += std::popcount(a & ~(lb - 1u) & ~lb);
        b &= b - 1u;
    }
    return (inv & 1) ? -1 : 1;
}

}  // namespace

SuperFunction SuperFunction::operator*(const SuperFunction& o) const {
    if (chart_ != o.chart_) throw SymError("chart mismatch");
    SuperFunction r(chart_);
    for (auto& [ma, ca] : terms_)
        for (auto& [mb, cb] : o.terms_) {
            if (ma & mb) continue;
            Expr c = sym::mul(ca, cb);
            if (merge_sign(ma, mb) < 0) c = sym::neg(std::move(c));
            r.set(ma | mb, sym::add(r.coeff(ma | mb), c));
        }
    return r;
}

SuperFunction SuperFunction::operator*(const Expr& e) const {
    SuperFunction r(chart_);
    for (auto& [m, c] : terms_) r.set(m, sym::mul(e, c));
    return r;
}

SuperFunction SuperFunction::inverse() const {
    Expr b = body();
    if (!sym::is_unit(b)) throw SymError("superfunction body is not a unit");
    Expr binv = sym::div(sym::one(), b);
    SuperFunction nil = *this;
    nil.set(0, sym::zero());
    // 1/(b + nu) = b^-1 sum_k (-nu/b)^k
    SuperFunction w = nil * binv;
    SuperFunction acc = constant(chart_, Scalar(1));
    SuperFunction pw = constant(chart_, Scalar(1));
    for (size_t k = 1; k <= chart_.odds.size(); ++k) {
        pw = pw * w;
        if (pw.terms_.empty()) break;
        acc = (k & 1) ? acc - pw : acc + pw;
    }
    return acc * binv;
}

SuperFunction SuperFunction::diff_even(const std::string& name) const {
    SuperFunction r(chart_);
    for (auto& [m, e] : terms_) r.set(m, sym::diff(e, name));
    return r;
}

SuperFunction SuperFunction::diff_odd(const std::string& name) const {
    int j = chart_.odd_index(name);
    if (j < 0) throw SymError("not an odd coordinate: " + name);
    unsigned bit = 1u << j;
    SuperFunction r(chart_);
    for (auto& [m, e] : terms_) {
        if (!(m & bit)) continue;
        int before = std::popcount(m & (bit - 1u));
        r.set(m & ~bit, (before & 1) ? sym::neg(e) : e);
    }
    return r;
}

std::string SuperFunction::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, e] : terms_) {
        if (!first) os << " + ";
        if (m == 0) {
            os << sym::print(e);
        } else {
            os << "(" << sym::print(e) << ")";
            for (size_t j = 0; j < chart_.odds.size(); ++j)
                if (m & (1u << j)) os << "*" << chart_.odds[j];
        }
        first = false;
    }
    return os.str();
}

bool sf_equal(const SuperFunction& a, const SuperFunction& b) { return (a - b).is_zero(); }

// ---------------------------------------------------------------- evaluation

namespace {

SuperFunction nilpotent_series(const SuperFunction& arg, const Expr& base,
                               std::function<Rational(int)> coeff_rule) {
    // base * sum_k c_k (nil/body-normalized input)^k, where arg is already the
    // series variable (nilpotent)
    const ChartSpec& chart = arg.chart();
    SuperFunction acc = SuperFunction::constant(chart, Scalar(1));
    SuperFunction pw = SuperFunction::constant(chart, Scalar(1));
    for (size_t k = 1; k <= chart.odds.size(); ++k) {
        pw = pw * arg;
        if (pw.terms().empty()) break;
        Rational ck = coeff_rule(static_cast<int>(k));
        acc = acc + pw * sym::cnst(Scalar(ck));
    }
    return acc * base;
}

}  // namespace

SuperFunction sf_eval(const Expr& e, const ChartSpec& chart,
                      const std::map<std::string, SuperFunction>& env) {
    using sym::Kind;
    switch (e->kind) {
        case Kind::Const: return SuperFunction::constant(chart, e->value);
        case Kind::Var: {
            auto it = env.find(e->name);
            if (it != env.end()) return it->second;
            // unbound names stay as even symbols on the chart
            return SuperFunction::from_expr(chart, e);
        }
        case Kind::Add: {
            SuperFunction r(chart);
            for (auto& a : e->args) r = r + sf_eval(a, chart, env);
            return r;
        }
        case Kind::Mul: {
            SuperFunction r = SuperFunction::constant(chart, Scalar(1));
            for (auto& a : e->args) r = r * sf_eval(a, chart, env);
            return r;
        }
        case Kind::Pow: {
            SuperFunction b = sf_eval(e->args[0], chart, env);
            int n = e->ipow;
            if (n < 0) {
                b = b.inverse();
                n = -n;
            }
            SuperFunction r = SuperFunction::constant(chart, Scalar(1));
            for (int k = 0; k < n; ++k) r = r * b;
            return r;
        }
        case Kind::Div:
            return sf_eval(e->args[0], chart, env) * sf_eval(e->args[1], chart, env).inverse();
        case Kind::Exp: {
            SuperFunction a = sf_eval(e->args[0], chart, env);
            Expr base = sym::exp(a.body());
            a.set(0, sym::zero());
            // exp(b + nu) = exp(b) sum nu^k / k!
            Rational fact = 1;
            return nilpotent_series(a, base, [fact](int k) mutable {
                fact *= k;
                return Rational(1) / fact;
            });
        }
        case Kind::Log: {
            SuperFunction a = sf_eval(e->args[0], chart, env);
            Expr b = a.body();
            if (!sym::is_unit(b)) throw SymError("log of non-unit superfunction");
            a.set(0, sym::zero());
            SuperFunction w = a * sym::div(sym::one(), b);
            // log(b(1+w)) = log b + sum (-1)^{k+1} w^k / k
            SuperFunction series =
                nilpotent_series(w, sym::one(), [](int k) {
                    Rational c(1, k);
                    return (k % 2) ? c : -c;
                });
            return series - SuperFunction::constant(chart, Scalar(1)) +
                   SuperFunction::from_expr(chart, sym::log(b));
        }
        case Kind::Sqrt: {
            SuperFunction a = sf_eval(e->args[0], chart, env);
            Expr b = a.body();
            if (!sym::is_unit(b)) throw SymError("sqrt of non-unit superfunction");
            a.set(0, sym::zero());
            SuperFunction w = a * sym::div(sym::one(), b);
            // sqrt(b(1+w)) = sqrt(b) sum C(1/2,k) w^k
            Rational c = 1;
            return nilpotent_series(w, sym::sqrt(b), [c](int k) mutable {
                c *= (Rational(1, 2) - (k - 1)) / k;
                return c;
            });
        }
        case Kind::Opaque: {
            SuperFunction a = sf_eval(e->args[0], chart, env);
            Expr b = a.body();
            a.set(0, sym::zero());
            if (a.terms().empty()) return SuperFunction::from_expr(chart, sym::opaque(e->name, b));
            // Taylor-expand through the registered derivative rules
            std::string tmp = "__series_t";
            Expr cur = sym::opaque(e->name, sym::var(tmp));
            SuperFunction acc = SuperFunction::from_expr(chart, sym::substitute(cur, {{tmp, b}}));
            SuperFunction pw = SuperFunction::constant(chart, Scalar(1));
            Rational fact = 1;
            for (size_t k = 1; k <= chart.odds.size(); ++k) {
                pw = pw * a;
                if (pw.terms().empty()) break;
                cur = sym::diff(cur, tmp);
                fact *= static_cast<long>(k);
                Expr ck = sym::substitute(cur, {{tmp, b}});
                acc = acc + pw * sym::mul(sym::cnst(Scalar(Rational(1) / fact)), ck);
            }
            return acc;
        }
    }
    throw SymError("sf_eval: bad node");
}

SuperFunction parse_superfunction(const ChartSpec& chart, const std::string& text) {
    sym::VarRegistry reg(chart.evens);
    std::map<std::string, SuperFunction> env;
    for (auto& o : chart.odds) {
        reg.add(o);
        env.emplace(o, SuperFunction::coordinate(chart, o));
    }
    return sf_eval(sym::parse(text, reg), chart, env);
}

// ---------------------------------------------------------------- fields

SuperVectorField make_vf(ChartSpec chart, std::map<std::string, SuperFunction> coeffs,
                         int parity) {
    SuperVectorField X{std::move(chart), std::move(coeffs), parity & 1};
    for (auto& [c, f] : X.coeffs) {
        if (!X.chart.is_coordinate(c)) throw SymError("vector field over unknown coordinate " + c);
        auto p = f.parity();
        if (!p) throw SymError("vector field coefficient not homogeneous");
        int expect = X.chart.has_even(c) ? X.parity : (X.parity ^ 1);
        if (!f.is_zero() && *p != expect)
            throw SymError("vector field coefficient parity mismatch at " + c);
    }
    return X;
}

SuperFunction apply_vf(const SuperVectorField& X, const SuperFunction& f) {
    if (X.chart != f.chart()) throw SymError("chart mismatch");
    SuperFunction r(X.chart);
    for (auto& [c, a] : X.coeffs) {
        SuperFunction d =
            X.chart.has_even(c) ? f.diff_even(c) : f.diff_odd(c);
        r = r + a * d;
    }
    return r;
}

SuperVectorField bracket(const SuperVectorField& X, const SuperVectorField& Y) {
    if (X.chart != Y.chart) throw SymError("chart mismatch");
    int sgn = (X.parity & Y.parity) ? -1 : 1;
    std::map<std::string, SuperFunction> coeffs;
    auto act = [&](const std::string& c) {
        SuperFunction fc = SuperFunction::coordinate(X.chart, c);
        SuperFunction xy = apply_vf(X, apply_vf(Y, fc));
        SuperFunction yx = apply_vf(Y, apply_vf(X, fc));
        return sgn < 0 ? xy + yx : xy - yx;
    };
    for (auto& c : X.chart.evens) coeffs.emplace(c, act(c));
    for (auto& c : X.chart.odds) coeffs.emplace(c, act(c));
    return make_vf(X.chart, std::move(coeffs), (X.parity + Y.parity) & 1);
}

bool vf_equal(const SuperVectorField& a, const SuperVectorField& b) {
    if (a.chart != b.chart) return false;
    auto all = a.chart.evens;
    all.insert(all.end(), a.chart.odds.begin(), a.chart.odds.end());
    for (auto& c : all) {
        SuperFunction fa = a.coeffs.count(c) ? a.coeffs.at(c) : SuperFunction(a.chart);
        SuperFunction fb = b.coeffs.count(c) ? b.coeffs.at(c) : SuperFunction(b.chart);
        if (!sf_equal(fa, fb)) return false;
    }
    return true;
}

SuperVectorField vf_scale(const SuperVectorField& X, const SuperFunction& u) {
    std::map<std::string, SuperFunction> coeffs;
    for (auto& [c, f] : X.coeffs) coeffs.emplace(c, u * f);
    auto p = u.parity();
    if (!p) throw SymError("vf_scale: non-homogeneous scale");
    return make_vf(X.chart, std::move(coeffs), (X.parity + *p) & 1);
}

SuperVectorField parse_vf(const ChartSpec& chart, const std::string& text) {
    // replace each d/d<ident> with a marker variable, then parse
    std::string prepared;
    std::vector<std::string> markers;
    size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 3, "d/d") == 0) {
            size_t j = i + 3, k = j;
            while (k < text.size() && (std::isalnum(static_cast<unsigned char>(text[k])) ||
                                       text[k] == '_'))
                ++k;
            std::string name = text.substr(j, k - j);
            if (name.empty() || !chart.is_coordinate(name))
                throw SymError("bad derivative target in vector field literal");
            prepared += "__dd_" + name;
            if (std::find(markers.begin(), markers.end(), name) == markers.end())
                markers.push_back(name);
            i = k;
        } else {
            prepared += text[i++];
        }
    }
    sym::VarRegistry reg(chart.evens);
    for (auto& o : chart.odds) reg.add(o);
    for (auto& m : markers) reg.add("__dd_" + m);
    Expr e = sym::parse(prepared, reg);

    std::map<std::string, SuperFunction> env;
    for (auto& o : chart.odds) env.emplace(o, SuperFunction::coordinate(chart, o));

    std::map<std::string, SuperFunction> coeffs;
    auto add_term = [&](Expr term) {
        std::vector<Expr> extra;
        while (term->kind == sym::Kind::Div) {
            extra.push_back(sym::div(sym::one(), term->args[1]));
            term = term->args[0];
        }
        std::vector<Expr> factors;
        std::function<void(const Expr&)> flatten = [&](const Expr& f) {
            if (f->kind == sym::Kind::Mul)
                for (auto& a : f->args) flatten(a);
            else
                factors.push_back(f);
        };
        flatten(term);
        factors.insert(factors.end(), extra.begin(), extra.end());
        std::string target;
        std::vector<Expr> rest;
        for (auto& f : factors) {
            if (f->kind == sym::Kind::Var && f->name.rfind("__dd_", 0) == 0) {
                if (!target.empty()) throw SymError("vector field literal: repeated d/d factor");
                target = f->name.substr(5);
            } else {
                rest.push_back(f);
            }
        }
        if (target.empty()) throw SymError("vector field literal: term without d/d factor");
        SuperFunction c = rest.empty() ? SuperFunction::constant(chart, Scalar(1))
                                       : sf_eval(sym::mul(rest), chart, env);
        auto [it, fresh] = coeffs.emplace(target, c);
        if (!fresh) it->second = it->second + c;
    };
    if (e->kind == sym::Kind::Add)
        for (auto& t : e->args) add_term(t);
    else
        add_term(e);

    // infer parity from any nonzero coefficient
    std::optional<int> parity;
    for (auto& [c, f] : coeffs) {
        if (f.is_zero()) continue;
        auto p = f.parity();
        if (!p) throw SymError("vector field literal: non-homogeneous coefficient");
        int field_p = chart.has_even(c) ? *p : (*p ^ 1);
        if (parity && *parity != field_p)
            throw SymError("vector field literal: mixed parity");
        parity = field_p;
    }
    return make_vf(chart, std::move(coeffs), parity.value_or(0));
}

// ---------------------------------------------------------------- forms

SuperOneForm exterior_d(const SuperFunction& f) {
    SuperOneForm w{f.chart(), {}};
    for (auto& c : f.chart().evens) w.coeffs.emplace(c, f.diff_even(c));
    for (auto& c : f.chart().odds) w.coeffs.emplace(c, f.diff_odd(c));
    return w;
}

SuperFunction pair(const SuperOneForm& omega, const SuperVectorField& X) {
    if (omega.chart != X.chart) throw SymError("chart mismatch");
    SuperFunction r(X.chart);
    for (auto& [c, f] : omega.coeffs) {
        auto it = X.coeffs.find(c);
        if (it == X.coeffs.end()) continue;
        r = r + f * it->second;
    }
    return r;
}

bool form_equal(const SuperOneForm& a, const SuperOneForm& b) {
    if (a.chart != b.chart) return false;
    auto all = a.chart.evens;
    all.insert(all.end(), a.chart.odds.begin(), a.chart.odds.end());
    for (auto& c : all) {
        SuperFunction fa = a.coeffs.count(c) ? a.coeffs.at(c) : SuperFunction(a.chart);
        SuperFunction fb = b.coeffs.count(c) ? b.coeffs.at(c) : SuperFunction(b.chart);
        if (!sf_equal(fa, fb)) return false;
    }
    return true;
}

// ---------------------------------------------------------------- morphisms

ChartMorphism make_morphism(ChartSpec source, ChartSpec target,
                            std::map<std::string, SuperFunction> assign) {
    ChartMorphism F{std::move(source), std::move(target), std::move(assign)};
    for (auto& c : F.target.evens) {
        auto it = F.assign.find(c);
        if (it == F.assign.end()) throw SymError("morphism missing assignment for " + c);
        auto p = it->second.parity();
        if (!p || *p != 0) throw SymError("even coordinate assigned odd value: " + c);
    }
    for (auto& c : F.target.odds) {
        auto it = F.assign.find(c);
        if (it == F.assign.end()) throw SymError("morphism missing assignment for " + c);
        if (!it->second.is_zero()) {
            auto p = it->second.parity();
            if (!p || *p != 1) throw SymError("odd coordinate assigned even value: " + c);
        }
    }
    return F;
}

ChartMorphism identity_morphism(const ChartSpec& chart) {
    std::map<std::string, SuperFunction> assign;
    for (auto& c : chart.evens) assign.emplace(c, SuperFunction::coordinate(chart, c));
    for (auto& c : chart.odds) assign.emplace(c, SuperFunction::coordinate(chart, c));
    return make_morphism(chart, chart, std::move(assign));
}

SuperFunction pullback_fn(const ChartMorphism& F, const SuperFunction& f) {
    if (f.chart() != F.target) throw SymError("pullback: chart mismatch");
    std::map<std::string, SuperFunction> env;
    for (auto& c : F.target.evens) env.emplace(c, F.assign.at(c));
    SuperFunction r(F.source);
    for (auto& [mask, e] : f.terms()) {
        SuperFunction t = sf_eval(e, F.source, env);
        for (size_t j = 0; j < F.target.odds.size(); ++j)
            if (mask & (1u << j)) t = t * F.assign.at(F.target.odds[j]);
        r = r + t;
    }
    return r;
}

SuperOneForm pullback_form(const ChartMorphism& F, const SuperOneForm& omega) {
    if (omega.chart != F.target) throw SymError("pullback: chart mismatch");
    SuperOneForm r{F.source, {}};
    auto acc = [&](const std::string& c, const SuperFunction& g) {
        auto [it, fresh] = r.coeffs.emplace(c, g);
        if (!fresh) it->second = it->second + g;
    };
    for (auto& [xc, f] : omega.coeffs) {
        SuperFunction g = pullback_fn(F, f);
        SuperOneForm dx = exterior_d(F.assign.at(xc));
        for (auto& [c, h] : dx.coeffs) acc(c, g * h);
    }
    return r;
}

ChartMorphism compose(const ChartMorphism& F, const ChartMorphism& G) {
    if (G.target != F.source) throw SymError("compose: chart mismatch");
    std::map<std::string, SuperFunction> assign;
    for (auto& [c, f] : F.assign) assign.emplace(c, pullback_fn(G, f));
    return make_morphism(G.source, F.target, std::move(assign));
}

bool morphism_equal(const ChartMorphism& a, const ChartMorphism& b) {
    if (a.source != b.source || a.target != b.target) return false;
    for (auto& [c, f] : a.assign)
        if (!sf_equal(f, b.assign.at(c))) return false;
    return true;
}

}  // namespace susyk::sfn
