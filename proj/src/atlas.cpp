#include "susykern/atlas.hpp"

#include <json.hpp>

#include <sstream>

namespace susyk::atl {

using sfn::ChartMorphism;
using sfn::ChartSpec;
using sfn::SuperFunction;
using sym::Expr;

int Atlas::chart_index(const std::string& name) const {
    for (size_t i = 0; i < charts.size(); ++i)
        if (charts[i].name == name) return static_cast<int>(i);
    return -1;
}

// ---------------------------------------------------------------- verification

namespace {

/// First coordinate where the two morphisms disagree, with the residual.
std::optional<std::pair<std::string, std::string>> morphism_diff(const ChartMorphism& a,
                                                                 const ChartMorphism& b) {
    for (auto& [c, f] : a.assign) {
        SuperFunction d = f - b.assign.at(c);
        if (!d.is_zero()) return std::make_pair(c, d.str());
    }
    return std::nullopt;
}

}  // namespace

CocycleReport verify_cocycle(const Atlas& a) {
    CocycleReport rep;
    auto fail = [&](std::string where, std::string residual) {
        rep.pass = false;
        rep.where = std::move(where);
        rep.residual = std::move(residual);
        return rep;
    };
    for (auto& [ij, t] : a.transitions) {
        auto [i, j] = ij;
        if (i == j) {
            auto d = morphism_diff(t, sfn::identity_morphism(a.charts[i].spec));
            if (d) return fail(a.charts[i].name + "->" + a.charts[i].name, d->second);
            continue;
        }
        auto back = a.transitions.find({j, i});
        if (back == a.transitions.end())
            return fail(a.charts[j].name + "->" + a.charts[i].name, "missing transition");
        auto round = sfn::compose(back->second, t);
        auto d = morphism_diff(round, sfn::identity_morphism(a.charts[i].spec));
        if (d)
            return fail(a.charts[i].name + "->" + a.charts[j].name + "->" + a.charts[i].name +
                            " at " + d->first,
                        d->second);
    }
    int n = static_cast<int>(a.charts.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                auto ij = a.transitions.find({i, j});
                auto jk = a.transitions.find({j, k});
                auto ik = a.transitions.find({i, k});
                if (ij == a.transitions.end() || jk == a.transitions.end() ||
                    ik == a.transitions.end())
                    continue;
                auto through = sfn::compose(jk->second, ij->second);
                auto d = morphism_diff(through, ik->second);
                if (d)
                    return fail(a.charts[i].name + "->" + a.charts[j].name + "->" +
                                    a.charts[k].name + " at " + d->first,
                                d->second);
            }
    return rep;
}

// ---------------------------------------------------------------- builders

Atlas build_projective_atlas(int m, int n) {
    if (m < 1 || n < 0) throw SymError("projective atlas: need m >= 1, n >= 0");
    if (m + 1 > 6 || n > 8) throw SymError("projective atlas: size bound exceeded");
    Atlas a;
    auto uname = [](int k) { return "u" + std::to_string(k); };
    auto xname = [](int l) { return "xi" + std::to_string(l); };
    for (int i = 0; i <= m; ++i) {
        ChartSpec spec;
        for (int k = 0; k <= m; ++k)
            if (k != i) spec.evens.push_back(uname(k));
        for (int l = 1; l <= n; ++l) spec.odds.push_back(xname(l));
        a.charts.push_back({"U" + std::to_string(i), spec});
    }
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j) {
            if (i == j) continue;
            const ChartSpec& src = a.charts[i].spec;
            const ChartSpec& dst = a.charts[j].spec;
            Expr uj = sym::var(uname(j));
            std::map<std::string, SuperFunction> assign;
            for (int k = 0; k <= m; ++k) {
                if (k == j) continue;
                Expr val = (k == i) ? sym::div(sym::one(), uj)
                                    : sym::div(sym::var(uname(k)), uj);
                assign.emplace(uname(k), SuperFunction::from_expr(src, val));
            }
            for (int l = 1; l <= n; ++l) {
                SuperFunction xi = SuperFunction::coordinate(src, xname(l));
                assign.emplace(xname(l), xi * sym::div(sym::one(), uj));
            }
            a.transitions.emplace(std::make_pair(i, j),
                                  sfn::make_morphism(src, dst, std::move(assign)));
            a.overlap_constraints[{i, j}] = uname(j) + " invertible";
        }
    return a;
}

Atlas build_pi_line_atlas() {
    Atlas a;
    ChartSpec spec{{"u"}, {"xi"}};
    a.charts.push_back({"V0", spec});
    a.charts.push_back({"V1", spec});
    auto make = [&]() {
        std::map<std::string, SuperFunction> assign;
        assign.emplace("u", SuperFunction::from_expr(spec, sym::div(sym::one(), sym::var("u"))));
        SuperFunction xi = SuperFunction::coordinate(spec, "xi");
        assign.emplace("xi",
                       xi * sym::div(sym::cnst(-1), sym::pow(sym::var("u"), 2)));
        return sfn::make_morphism(spec, spec, std::move(assign));
    };
    a.transitions.emplace(std::make_pair(0, 1), make());
    a.transitions.emplace(std::make_pair(1, 0), make());
    a.overlap_constraints[{0, 1}] = "u invertible";
    a.overlap_constraints[{1, 0}] = "u invertible";
    return a;
}

// ---------------------------------------------------------------- cocycles

namespace {

/// Reduced transition of the even coordinate, as an Expr in chart i's variable.
Expr reduced_transition(const Atlas& a, int i, int j) {
    const auto& t = a.transitions.at({i, j});
    return t.assign.at(a.charts[j].spec.evens[0]).body();
}

}  // namespace

CocycleReport verify_line_cocycle(const LineBundleCocycle& l, const Atlas& base) {
    CocycleReport rep;
    auto fail = [&](std::string where, std::string residual) {
        rep.pass = false;
        rep.where = std::move(where);
        rep.residual = std::move(residual);
        return rep;
    };
    for (auto& [ij, gij] : l.g) {
        auto [i, j] = ij;
        if (i == j) {
            Expr r = sym::normalize(sym::sub(gij, sym::one()));
            if (!sym::is_zero_yes(r)) return fail(l.chart_names[i], sym::print(r));
            continue;
        }
        Expr gji = l.g.at({j, i});
        Expr pulled = sym::substitute(gji, {{l.vars[j], reduced_transition(base, i, j)}});
        Expr r = sym::normalize(sym::sub(sym::mul(gij, pulled), sym::one()));
        if (!sym::is_zero_yes(r))
            return fail(l.chart_names[i] + "->" + l.chart_names[j], sym::print(r));
    }
    int n = static_cast<int>(l.chart_names.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                if (!l.g.count({i, j}) || !l.g.count({j, k}) || !l.g.count({k, i})) continue;
                Expr gjk = sym::substitute(l.g.at({j, k}),
                                           {{l.vars[j], reduced_transition(base, i, j)}});
                Expr gki = sym::substitute(l.g.at({k, i}),
                                           {{l.vars[k], reduced_transition(base, i, k)}});
                Expr r = sym::normalize(
                    sym::sub(sym::mul({l.g.at({i, j}), gjk, gki}), sym::one()));
                if (!sym::is_zero_yes(r))
                    return fail(l.chart_names[i] + "->" + l.chart_names[j] + "->" +
                                    l.chart_names[k],
                                sym::print(r));
            }
    return rep;
}

LineBundleCocycle canonical_cocycle(const Atlas& a) {
    LineBundleCocycle l;
    for (auto& c : a.charts) {
        if (c.spec.evens.size() != 1 || !c.spec.odds.empty())
            throw SymError("canonical cocycle needs a reduced atlas with one even coordinate");
        l.chart_names.push_back(c.name);
        l.vars.push_back(c.spec.evens[0]);
    }
    for (auto& [ij, t] : a.transitions) {
        auto [i, j] = ij;
        if (i == j) continue;
        Expr f = t.assign.at(a.charts[j].spec.evens[0]).body();
        l.g[{i, j}] = sym::normalize(sym::diff(f, l.vars[i]));
    }
    return l;
}

LineBundleCocycle odd_part_cocycle(const Atlas& a) {
    LineBundleCocycle l;
    for (auto& c : a.charts) {
        if (c.spec.evens.size() != 1 || c.spec.odds.size() != 1)
            throw SymError("odd-part cocycle needs a 1|1 atlas");
        l.chart_names.push_back(c.name);
        l.vars.push_back(c.spec.evens[0]);
    }
    for (auto& [ij, t] : a.transitions) {
        auto [i, j] = ij;
        if (i == j) continue;
        const SuperFunction& eta = t.assign.at(a.charts[j].spec.odds[0]);
        for (auto& [mask, e] : eta.terms())
            if (mask != 1u && !sym::is_zero_yes(e))
                throw SymError("odd transition is not linear in the odd coordinate");
        l.g[{i, j}] = sym::normalize(eta.coeff(1));
    }
    return l;
}

LineBundleCocycle cocycle_product(const LineBundleCocycle& a, const LineBundleCocycle& b) {
    if (a.chart_names != b.chart_names || a.vars != b.vars)
        throw SymError("cocycle product: mismatched covers");
    LineBundleCocycle r{a.chart_names, a.vars, {}};
    for (auto& [ij, gij] : a.g) r.g[ij] = sym::normalize(sym::mul(gij, b.g.at(ij)));
    return r;
}

LineBundleCocycle cocycle_square(const LineBundleCocycle& l) { return cocycle_product(l, l); }

std::optional<std::pair<LineBundleCocycle, LineBundleCocycle>> cocycle_sqrt(
    const LineBundleCocycle& l) {
    if (l.chart_names.size() != 2) throw SymError("cocycle sqrt: need the two-chart cover");
    auto mono = sym::as_laurent_monomial(l.g.at({0, 1}), l.vars[0]);
    if (!mono) throw SymError("cocycle sqrt: transition is not a Laurent monomial");
    auto [c, d] = *mono;
    if (d % 2 != 0) return std::nullopt;
    Expr s;
    if (auto ec = c.exact_sqrt())
        s = sym::cnst(*ec);
    else
        s = sym::sqrt(sym::cnst(c));
    auto build = [&](Expr coeff) {
        LineBundleCocycle r{l.chart_names, l.vars, {}};
        Expr u = sym::var(l.vars[0]);
        r.g[{0, 1}] = sym::normalize(sym::mul(coeff, sym::pow(u, d / 2)));
        // standard cover: the chart-1 coordinate is 1/u
        Expr inv = sym::div(sym::one(), r.g.at({0, 1}));
        r.g[{1, 0}] = sym::substitute(
            inv, {{l.vars[0], sym::div(sym::one(), sym::var(l.vars[1]))}});
        return r;
    };
    return std::make_pair(build(s), build(sym::neg(s)));
}

int degree(const LineBundleCocycle& l) {
    auto mono = sym::as_laurent_monomial(l.g.at({0, 1}), l.vars[0]);
    if (!mono) throw SymError("degree: transition is not a Laurent monomial");
    return mono->second;
}

// ---------------------------------------------------------------- theta

ThetaCharacteristic make_theta(Atlas base, LineBundleCocycle L) {
    LineBundleCocycle K = canonical_cocycle(base);
    for (auto& [ij, gij] : L.g) {
        if (ij.first == ij.second) continue;
        Expr r = sym::normalize(sym::sub(sym::mul(gij, gij), K.g.at(ij)));
        if (!sym::is_zero_yes(r))
            throw SymError("theta characteristic: g^2 != f' on " +
                           L.chart_names[ij.first] + "->" + L.chart_names[ij.second] +
                           ", residual " + sym::print(r));
    }
    return ThetaCharacteristic{std::move(base), std::move(L)};
}

Atlas build_supermanifold_from_theta(const ThetaCharacteristic& theta,
                                     const std::string& odd_name) {
    const Atlas& base = theta.base;
    Atlas a;
    for (auto& c : base.charts) {
        ChartSpec spec{c.spec.evens, {odd_name}};
        a.charts.push_back({c.name, spec});
    }
    for (auto& [ij, t] : base.transitions) {
        auto [i, j] = ij;
        if (i == j) continue;
        const ChartSpec& src = a.charts[i].spec;
        std::map<std::string, SuperFunction> assign;
        assign.emplace(a.charts[j].spec.evens[0],
                       SuperFunction::from_expr(src, reduced_transition(base, i, j)));
        SuperFunction xi = SuperFunction::coordinate(src, odd_name);
        assign.emplace(odd_name, xi * theta.L.g.at(ij));
        a.transitions.emplace(ij, sfn::make_morphism(src, a.charts[j].spec, std::move(assign)));
        auto oc = base.overlap_constraints.find(ij);
        if (oc != base.overlap_constraints.end()) a.overlap_constraints[ij] = oc->second;
    }
    auto rep = verify_cocycle(a);
    if (!rep.pass)
        throw SymError("theta atlas fails the cocycle check at " + rep.where + ": " +
                       rep.residual);
    return a;
}

// ---------------------------------------------------------------- serialization

std::string atlas_to_json(const Atlas& a) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["charts"] = nlohmann::ordered_json::array();
    for (auto& c : a.charts) {
        nlohmann::ordered_json jc;
        jc["name"] = c.name;
        jc["evens"] = c.spec.evens;
        jc["odds"] = c.spec.odds;
        j["charts"].push_back(jc);
    }
    j["overlaps"] = nlohmann::ordered_json::array();
    for (auto& [ij, cons] : a.overlap_constraints) {
        nlohmann::ordered_json jo;
        jo["from"] = a.charts[ij.first].name;
        jo["to"] = a.charts[ij.second].name;
        jo["constraint"] = cons;
        j["overlaps"].push_back(jo);
    }
    j["transitions"] = nlohmann::ordered_json::array();
    for (auto& [ij, t] : a.transitions) {
        nlohmann::ordered_json jt;
        jt["from"] = a.charts[ij.first].name;
        jt["to"] = a.charts[ij.second].name;
        nlohmann::ordered_json assign;
        const ChartSpec& dst = a.charts[ij.second].spec;
        for (auto& c : dst.evens) assign[c] = t.assign.at(c).str();
        for (auto& c : dst.odds) assign[c] = t.assign.at(c).str();
        jt["assign"] = assign;
        j["transitions"].push_back(jt);
    }
    return j.dump(2) + "\n";
}

Atlas atlas_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("schema").get<int>() != 1) throw SymError("atlas json: unsupported schema");
    Atlas a;
    for (auto& jc : j.at("charts")) {
        ChartSpec spec{jc.at("evens").get<std::vector<std::string>>(),
                       jc.at("odds").get<std::vector<std::string>>()};
        a.charts.push_back({jc.at("name").get<std::string>(), spec});
    }
    for (auto& jo : j.at("overlaps")) {
        int i = a.chart_index(jo.at("from").get<std::string>());
        int k = a.chart_index(jo.at("to").get<std::string>());
        if (i < 0 || k < 0) throw SymError("atlas json: unknown chart in overlap");
        a.overlap_constraints[{i, k}] = jo.at("constraint").get<std::string>();
    }
    for (auto& jt : j.at("transitions")) {
        int i = a.chart_index(jt.at("from").get<std::string>());
        int k = a.chart_index(jt.at("to").get<std::string>());
        if (i < 0 || k < 0) throw SymError("atlas json: unknown chart in transition");
        const ChartSpec& src = a.charts[i].spec;
        const ChartSpec& dst = a.charts[k].spec;
        std::map<std::string, SuperFunction> assign;
        for (auto& [name, val] : jt.at("assign").items())
            assign.emplace(name, sfn::parse_superfunction(src, val.get<std::string>()));
        a.transitions.emplace(std::make_pair(i, k),
                              sfn::make_morphism(src, dst, std::move(assign)));
    }
    return a;
}

}  // namespace susyk::atl
