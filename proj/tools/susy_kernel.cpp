// Batch verification front end for the susykern library.
//
// Subcommands: atlas verify|build, susy check|canon|auto|elliptic-gens,
// theta sqrt|degree|build, fop roundtrip|pi-glue|phi-check,
// elliptic verify|invariants, parse.
//
// Exit codes: 0 all checks pass, 1 verification failure or library error,
// 2 usage / input parse error.

#include <CLI11.hpp>
#include <json.hpp>

#include "susykern/atlas.hpp"
#include "susykern/elliptic.hpp"
#include "susykern/fop.hpp"
#include "susykern/rng.hpp"
#include "susykern/susy.hpp"

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;
using namespace susyk;

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string command;
    json inputs = json::object();
    std::vector<Check> checks;

    void add(const std::string& name, bool pass, const std::string& detail = "") {
        checks.push_back(Check{name, pass, detail});
    }
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

int emit(const Report& r, bool as_json) {
    if (as_json) {
        json out;
        out["schema"] = 1;
        out["command"] = r.command;
        out["inputs"] = r.inputs;
        json checks = json::array();
        for (const auto& c : r.checks) {
            json e;
            e["name"] = c.name;
            e["verdict"] = c.pass ? "pass" : "fail";
            if (!c.detail.empty()) e["detail"] = c.detail;
            checks.push_back(e);
        }
        out["checks"] = checks;
        out["verdict"] = r.all_pass() ? "pass" : "fail";
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& c : r.checks) {
            std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
            if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
            std::cout << "\n";
        }
        std::cout << "overall: " << (r.all_pass() ? "pass" : "fail") << "\n";
    }
    return r.all_pass() ? 0 : 1;
}

// "2i", "i", "-i", "0.25+2i", "1/4+2i", "3", "1/2" -> complex
std::complex<double> parse_complex(const std::string& text) {
    auto number = [](const std::string& s) -> double {
        try {
            return [&s]() -> double {
                size_t slash = s.find('/');
                if (slash != std::string::npos) {
                    size_t p1 = 0, p2 = 0;
                    double num = std::stod(s.substr(0, slash), &p1);
                    double den = std::stod(s.substr(slash + 1), &p2);
                    if (p1 != slash || slash + 1 + p2 != s.size() || den == 0)
                        throw std::invalid_argument("bad rational '" + s + "'");
                    return num / den;
                }
                size_t pos = 0;
                double v = std::stod(s, &pos);
                if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
                return v;
            }();
        } catch (const SymError&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number '" + s + "'");
        }
    };
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    // split at the last +/- that is not at position 0 and not after e/E or /
    size_t split = std::string::npos;
    for (size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E' &&
            s[k - 1] != '/' && s[k - 1] != '+' && s[k - 1] != '-') {
            split = k;
            break;
        }
    }
    auto part = [&](const std::string& p) -> std::pair<double, bool> {
        if (p.empty()) throw std::invalid_argument("empty component in '" + text + "'");
        bool imag = p.back() == 'i' || p.back() == 'I';
        std::string core = imag ? p.substr(0, p.size() - 1) : p;
        if (imag && (core.empty() || core == "+")) core = "1";
        if (imag && core == "-") core = "-1";
        return {number(core), imag};
    };
    double re = 0, im = 0;
    auto apply = [&](const std::string& p) {
        auto [v, imag] = part(p);
        (imag ? im : re) += v;
    };
    if (split == std::string::npos) {
        apply(s);
    } else {
        apply(s.substr(0, split));
        apply(s.substr(split));
    }
    return {re, im};
}

std::string cx_str(std::complex<double> v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g%+.12gi", v.real(), v.imag());
    return buf;
}

// -- atlas ---------------------------------------------------------------------

atl::Atlas select_atlas(const std::vector<int>& proj, bool pi_line, const std::string& file) {
    int chosen = (proj.size() == 2) + pi_line + !file.empty();
    if (chosen != 1)
        throw CLI::ValidationError("select exactly one of --proj M N, --pi, --file");
    if (pi_line) return atl::build_pi_line_atlas();
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw SymError("cannot open '" + file + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return atl::atlas_from_json(ss.str());
    }
    if (proj[0] < 1 || proj[1] < 0) throw SymError("--proj needs m >= 1, n >= 0");
    return atl::build_projective_atlas(proj[0], proj[1]);
}

int cmd_atlas_verify(Report& r, const atl::Atlas& a) {
    auto rep = atl::verify_cocycle(a);
    r.add("cocycle", rep.pass,
          rep.pass ? std::to_string(a.charts.size()) + " charts, all overlap identities exact"
                   : rep.where + ": " + rep.residual);
    return 0;
}

// -- susy ----------------------------------------------------------------------

sfn::SuperVectorField parse_field(const std::string& text) {
    return sfn::parse_vf(susy::standard_chart(), text);
}

void cmd_susy_check(Report& r, const std::string& field) {
    auto D = parse_field(field);
    auto fr = susy::is_susy(D);
    r.add("frame-condition", fr.ok, fr.ok ? "D and D^2 span" : "not a unit: " + fr.witness);
}

void cmd_susy_canon(Report& r, const std::string& field) {
    auto cc = susy::canonical_coordinates(parse_field(field));
    for (const auto& [name, f] : cc.F.assign)
        r.add("coordinate " + name, true, f.str());
    r.add("residual-w", cc.residual_w.is_zero(), cc.residual_w.str());
    r.add("residual-eta", cc.residual_eta.is_zero(), cc.residual_eta.str());
    r.add("change-of-coordinates", true, cc.global ? "global" : "local only (flagged)");
}

void cmd_susy_auto(Report& r, const std::string& fs, const std::string& gs) {
    sym::VarRegistry reg({"z"});
    susy::SusyAutoCandidate c{sym::parse(fs, reg), sym::parse(gs, reg)};
    auto t = susy::is_susy_automorphism(c);
    r.add("structure-preserving", t.has_value(),
          t ? "t = " + sym::print(sym::normalize(*t)) : "f' = g^2 fails");
    auto cls = susy::classify_c11_automorphism(c);
    if (cls)
        r.add("classified", true,
              "f = a z + b with a = " + cls->a.str() + ", b = " + cls->b.str() +
                  ", g = " + (cls->sign > 0 ? "+" : "-") + "sqrt(a)");
    else
        r.add("classified", false, "not of the form (a z + b, +-sqrt(a) zeta)");
}

void cmd_susy_elliptic_gens(Report& r, const std::string& tau_text, int sa, int sb) {
    sym::VarRegistry reg;
    sym::Expr te = sym::normalize(sym::parse(tau_text, reg));
    if (te->kind != sym::Kind::Const) throw SymError("--tau must be an exact constant here");
    Scalar tau = te->value;
    auto [A, B] = susy::elliptic_action_generators(tau, sa, sb);
    auto tA = susy::is_susy_automorphism(A);
    auto tB = susy::is_susy_automorphism(B);
    auto unit = [](const std::optional<sym::Expr>& t) {
        return t && sym::is_zero(sym::sub(*t, sym::cnst(Scalar(1)))).verdict == sym::Tri::Yes;
    };
    r.add("generator-A", unit(tA), "(z+1, " + std::string(sa > 0 ? "+" : "-") + "zeta), t = 1");
    r.add("generator-B", unit(tB),
          "(z+tau, " + std::string(sb > 0 ? "+" : "-") + "zeta), t = 1");
    auto FA = susy::candidate_morphism(A);
    auto FB = susy::candidate_morphism(B);
    r.add("commute", sfn::morphism_equal(sfn::compose(FA, FB), sfn::compose(FB, FA)),
          "A o B = B o A exactly");
}

// -- theta ---------------------------------------------------------------------

void cmd_theta_degree(Report& r, bool pi_line) {
    atl::Atlas a = pi_line ? atl::build_pi_line_atlas() : atl::build_projective_atlas(1, 1);
    auto odd = atl::odd_part_cocycle(a);
    int d = atl::degree(odd);
    r.add("odd-cocycle-degree", true, std::to_string(d));
    r.add("expected-degree", d == (pi_line ? -2 : -1),
          pi_line ? "pi-line odd part has degree -2" : "projective odd part has degree -1");
}

void cmd_theta_sqrt(Report& r, bool pi_line) {
    atl::Atlas reduced = atl::build_projective_atlas(1, 0);
    auto canonical = atl::canonical_cocycle(reduced);
    r.add("cotangent-degree", atl::degree(canonical) == -2, "f' cocycle has degree -2");
    if (!pi_line) {
        auto roots = atl::cocycle_sqrt(canonical);
        r.add("square-root-exists", roots.has_value(),
              roots ? sym::print(roots->first.g.at({0, 1})) + " and " +
                          sym::print(roots->second.g.at({0, 1}))
                    : "no monomial square root");
        if (roots) {
            for (auto* root : {&roots->first, &roots->second}) {
                auto theta = atl::make_theta(reduced, *root);
                auto sm = atl::build_supermanifold_from_theta(theta);
                auto rep = atl::verify_cocycle(sm);
                r.add("root g = " + sym::print(root->g.at({0, 1})), rep.pass,
                      "g^2 = f' and the 1|1 gluing is a cocycle");
            }
        }
    } else {
        auto odd = atl::odd_part_cocycle(atl::build_pi_line_atlas());
        int sq = atl::degree(atl::cocycle_square(odd));
        r.add("odd-square-degree", true, std::to_string(sq));
        r.add("square-matches-cotangent", sq == atl::degree(canonical),
              "degree " + std::to_string(sq) + " != -2: no theta structure on the pi-line");
    }
}

void cmd_theta_build(Report& r, int sign) {
    atl::Atlas reduced = atl::build_projective_atlas(1, 0);
    auto roots = atl::cocycle_sqrt(atl::canonical_cocycle(reduced));
    if (!roots) throw SymError("no square root of the cotangent cocycle");
    auto root = sign >= 0 ? roots->first : roots->second;
    auto theta = atl::make_theta(reduced, root);
    auto sm = atl::build_supermanifold_from_theta(theta);
    r.add("cocycle", atl::verify_cocycle(sm).pass, "1|1 gluing identities exact");
    auto odd = atl::odd_part_cocycle(sm);
    r.add("odd-part-roundtrip",
          sym::is_zero(sym::sub(odd.g.at({0, 1}), root.g.at({0, 1}))).verdict == sym::Tri::Yes,
          "odd transitions reproduce the chosen root");
    std::cout << atl::atlas_to_json(sm);
}

// -- fop -----------------------------------------------------------------------

void cmd_fop_roundtrip(Report& r, std::uint64_t seed, int cases) {
    Rng rng(seed);
    int done = 0, failed = 0;
    while (done < cases)
        for (int N : {0, 1, 2, 3})
            for (auto [m, no] : {std::pair{1, 1}, {2, 3}}) {
                if (done >= cases) break;
                fop::AffineCoords c;
                for (int j = 0; j < m; ++j) c.evens.push_back(rng.grassmann(N, 0));
                for (int j = 0; j < no; ++j) c.odds.push_back(rng.grassmann(N, 1));
                int i = static_cast<int>(rng.integer(0, m));
                auto p = fop::affine_to_proj(N, i, c);
                auto back = fop::proj_standard_form(p);
                grass::GrassmannElement lam = rng.grassmann(N, 0, true);
                std::vector<grass::GrassmannElement> evens, odds;
                for (auto& t : p.evens) evens.push_back(t * lam);
                for (auto& t : p.odds) odds.push_back(t * lam);
                auto back2 = fop::proj_standard_form(fop::make_proj_point(N, evens, odds, i));
                bool ok = back.evens == c.evens && back.odds == c.odds &&
                          back2.evens == c.evens && back2.odds == c.odds;
                failed += !ok;
                ++done;
            }
    r.add("roundtrip-and-rescaling", failed == 0,
          std::to_string(done - failed) + "/" + std::to_string(done) + " exact");
}

void cmd_fop_pi_glue(Report& r, std::uint64_t seed, int cases) {
    Rng rng(seed);
    int failed = 0;
    for (int k = 0; k < cases; ++k)
        if (!fop::pi_gluing_check(rng.grassmann(3, 0, true), rng.grassmann(3, 1))) ++failed;
    r.add("pi-gluing", failed == 0,
          std::to_string(cases - failed) + "/" + std::to_string(cases) + " exact");
}

void cmd_fop_phi_check(Report& r, std::uint64_t seed, int cases) {
    int n = 3;
    Rng rng(seed);
    int failed = 0;
    for (int k = 0; k < cases; ++k) {
        fop::RowPair rows;
        rows.n_gens = n;
        if (k % 2 == 0) {
            auto q = fop::make_pi_point(n, rng.grassmann(n, 0, true), rng.grassmann(n, 1),
                                        rng.grassmann(n, 0), rng.grassmann(n, 1));
            rows = fop::standard_rows(q);
            if (k % 4 == 0) rows.row_odd[3] = rows.row_odd[3] + rng.grassmann(n, 0);
        } else {
            rows.row_even = fop::Vec4{rng.grassmann(n, 0, true), rng.grassmann(n, 1),
                                      rng.grassmann(n, 0), rng.grassmann(n, 1)};
            rows.row_odd = fop::Vec4{rng.grassmann(n, 1), rng.grassmann(n, 0, true),
                                     rng.grassmann(n, 1), rng.grassmann(n, 0)};
        }
        if (fop::phi_invariance_check(rows) != fop::right_theta_stability_check(rows))
            ++failed;
    }
    r.add("phi-vs-right-theta", failed == 0,
          std::to_string(cases - failed) + "/" + std::to_string(cases) + " agree");
}

// -- elliptic --------------------------------------------------------------------

void cmd_elliptic_invariants(Report& r, std::complex<double> tau, double eps) {
    ell::EllipticContext ctx(tau);
    auto inv = ell::invariants(ctx);
    r.add("g2", true, cx_str(inv.g2));
    r.add("g3", true, cx_str(inv.g3));
    r.add("e1", true, cx_str(inv.e1));
    r.add("e2", true, cx_str(inv.e2));
    r.add("e3", true, cx_str(inv.e3));
    double sum = std::abs(inv.e1 + inv.e2 + inv.e3);
    r.add("e1+e2+e3 = 0", sum < eps, "residual " + std::to_string(sum));
    for (int i = 1; i <= 3; ++i) {
        std::complex<double> e = i == 1 ? inv.e1 : i == 2 ? inv.e2 : inv.e3;
        double res = std::abs(4.0 * e * e * e - inv.g2 * e - inv.g3);
        r.add("4e^3 - g2 e - g3 = 0 at e" + std::to_string(i), res < eps,
              "residual " + std::to_string(res));
    }
}

void cmd_elliptic_verify(Report& r, std::complex<double> tau, int samples, double eps,
                         std::uint64_t seed) {
    ell::EllipticContext ctx(tau);
    auto zs = ell::sample_points(ctx, samples, seed ? seed : 13);
    std::array<double, 4> worst_a{}, worst_h{};
    for (auto z : zs) {
        auto ra = ell::verify_affine_ideal(z, ctx);
        auto rh = ell::verify_homogeneous_ideal(ell::embed(z, ctx), ctx);
        for (int k = 0; k < 4; ++k) {
            worst_a[k] = std::max(worst_a[k], ra[k]);
            worst_h[k] = std::max(worst_h[k], rh[k]);
        }
    }
    const char* names[4] = {"cubic", "sqrt-derivative", "odd-pairing", "product"};
    char buf[64];
    for (int k = 0; k < 4; ++k) {
        std::snprintf(buf, sizeof(buf), "%.3e", worst_a[k]);
        r.add(std::string("affine ") + names[k], worst_a[k] < eps, buf);
    }
    for (int k = 0; k < 4; ++k) {
        std::snprintf(buf, sizeof(buf), "%.3e", worst_h[k]);
        r.add(std::string("homogeneous ") + names[k], worst_h[k] < eps, buf);
    }
    auto fit = ell::fit_alternate_cubic(ctx, zs);
    std::snprintf(buf, sizeof(buf), "max residual %.3e", fit.max_residual);
    r.add("alternate cubic fit (reported only)", true,
          "a1 = " + cx_str(fit.a1) + ", a2 = " + cx_str(fit.a2) + ", " + buf);
}

// -- parse -----------------------------------------------------------------------

sfn::ChartSpec parse_chart(const std::string& text) {
    sfn::ChartSpec spec;
    size_t semi = text.find(';');
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            std::string t;
            for (char c : item)
                if (!std::isspace(static_cast<unsigned char>(c))) t += c;
            if (!t.empty()) out.push_back(t);
        }
        return out;
    };
    spec.evens = split(text.substr(0, semi));
    if (semi != std::string::npos) spec.odds = split(text.substr(semi + 1));
    if (spec.evens.empty() && spec.odds.empty()) throw SymError("empty chart spec");
    return spec;
}

void cmd_parse(Report& r, const std::string& chart_text, const std::string& expr_text,
               bool as_vf) {
    auto chart = parse_chart(chart_text);
    if (as_vf) {
        auto X = sfn::parse_vf(chart, expr_text);
        r.add("parity", true, X.parity == 0 ? "even" : "odd");
        for (const auto& [name, f] : X.coeffs)
            if (!f.is_zero()) r.add("coefficient of d/d" + name, true, f.str());
    } else {
        auto f = sfn::parse_superfunction(chart, expr_text);
        r.add("normal-form", true, f.str());
        auto p = f.parity();
        r.add("parity", true, !p ? "mixed" : (*p == 0 ? "even" : "odd"));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification kernel for super-projective atlases, SUSY structures,\n"
                 "functor-of-points models, and the genus-1 embedding"};
    app.require_subcommand(1);
    app.fallthrough();

    bool as_json = false;
    std::uint64_t seed = 0;
    double eps = 1e-8;
    app.add_flag("--json", as_json, "emit a JSON report (schema 1)");
    app.add_option("--seed", seed, "seed for randomized property suites")->capture_default_str();
    app.add_option("--eps", eps, "numeric tolerance")->capture_default_str();

    // atlas
    auto* atlas = app.add_subcommand("atlas", "chart gluing verification");
    atlas->require_subcommand(1);
    atlas->fallthrough();
    std::vector<int> proj;
    bool pi_line = false;
    std::string file, out_path;
    for (auto* sub : {atlas->add_subcommand("verify", "check the cocycle identities"),
                      atlas->add_subcommand("build", "emit the atlas as JSON")}) {
        sub->add_option("--proj", proj, "projective space dimensions m n")->expected(2);
        sub->add_flag("--pi", pi_line, "the two-chart pi-line");
        sub->add_option("--file", file, "load an atlas from a JSON file");
        sub->fallthrough();
    }
    atlas->get_subcommand("build")->add_option("--out", out_path, "output file");

    // susy
    auto* susy_cmd = app.add_subcommand("susy", "SUSY structures on 1|1 charts");
    susy_cmd->require_subcommand(1);
    susy_cmd->fallthrough();
    std::string field = "d/dzeta + zeta*d/dz";
    std::string f_text = "z", g_text = "1", tau_text = "2*i";
    int sa = 1, sb = 1;
    auto* sc = susy_cmd->add_subcommand("check", "frame condition for an odd field");
    sc->add_option("--field", field, "odd vector field on (z, zeta)")->capture_default_str();
    auto* scanon = susy_cmd->add_subcommand("canon", "canonical coordinates (w, eta)");
    scanon->add_option("--field", field, "odd vector field on (z, zeta)")
        ->capture_default_str();
    auto* sauto = susy_cmd->add_subcommand("auto", "test (f(z), g(z) zeta) for invariance");
    sauto->add_option("--f", f_text, "even coordinate image f(z)")->capture_default_str();
    sauto->add_option("--g", g_text, "odd coefficient g(z)")->capture_default_str();
    auto* sgens = susy_cmd->add_subcommand("elliptic-gens", "lattice translation generators");
    sgens->add_option("--tau", tau_text, "exact lattice parameter (expression in i)")
        ->capture_default_str();
    sgens->add_option("--sa", sa, "sign on zeta for the z+1 generator")->capture_default_str();
    sgens->add_option("--sb", sb, "sign on zeta for the z+tau generator")
        ->capture_default_str();
    for (auto* sub : {sc, scanon, sauto, sgens}) sub->fallthrough();

    // theta
    auto* theta = app.add_subcommand("theta", "square roots of the cotangent cocycle");
    theta->require_subcommand(1);
    theta->fallthrough();
    bool theta_pi = false;
    int theta_sign = 1;
    auto* tdeg = theta->add_subcommand("degree", "degree of the odd transition cocycle");
    tdeg->add_flag("--pi", theta_pi, "use the pi-line instead of the 1|1 projective line");
    auto* tsqrt = theta->add_subcommand("sqrt", "existence of g with g^2 = f'");
    tsqrt->add_flag("--pi", theta_pi, "test the pi-line odd cocycle instead");
    auto* tbuild = theta->add_subcommand("build", "emit the 1|1 atlas built from a root");
    tbuild->add_option("--sign", theta_sign, "+1 or -1: which root")->capture_default_str();
    for (auto* sub : {tdeg, tsqrt, tbuild}) sub->fallthrough();

    // fop
    auto* fop_cmd = app.add_subcommand("fop", "functor-of-points property suites");
    fop_cmd->require_subcommand(1);
    fop_cmd->fallthrough();
    int cases_rt = 200, cases_glue = 100, cases_phi = 500;
    auto* frt = fop_cmd->add_subcommand("roundtrip", "projective standard-form round trips");
    frt->add_option("--cases", cases_rt, "number of cases")->capture_default_str();
    auto* fgl = fop_cmd->add_subcommand("pi-glue", "pi-line gluing identities");
    fgl->add_option("--cases", cases_glue, "number of cases")->capture_default_str();
    auto* fph = fop_cmd->add_subcommand("phi-check", "phi invariance vs right stability");
    fph->add_option("--cases", cases_phi, "number of cases")->capture_default_str();
    for (auto* sub : {frt, fgl, fph}) sub->fallthrough();

    // elliptic
    auto* ecmd = app.add_subcommand("elliptic", "numeric genus-1 verification");
    ecmd->require_subcommand(1);
    ecmd->fallthrough();
    std::string tau_cx = "2i";
    int samples = 20;
    auto* ev = ecmd->add_subcommand("verify", "ideal residuals at sample points");
    ev->add_option("--tau", tau_cx, "lattice parameter, e.g. 2i or 1/4+2i")
        ->capture_default_str();
    ev->add_option("--samples", samples, "number of sample points")->capture_default_str();
    auto* ei = ecmd->add_subcommand("invariants", "g2, g3 and the half-period values");
    ei->add_option("--tau", tau_cx, "lattice parameter")->capture_default_str();
    for (auto* sub : {ev, ei}) sub->fallthrough();

    // parse
    auto* pcmd = app.add_subcommand("parse", "parse and normalize a superfunction");
    pcmd->fallthrough();
    std::string chart_text = "z;zeta", expr_text = "0";
    bool as_vf = false;
    pcmd->add_option("--chart", chart_text, "chart spec 'evens;odds' (comma lists)")
        ->capture_default_str();
    pcmd->add_option("--expr", expr_text, "superfunction or vector-field literal")
        ->required();
    pcmd->add_flag("--vf", as_vf, "parse as a vector field");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Report r;
    try {
        if (atlas->parsed()) {
            atl::Atlas a = select_atlas(proj, pi_line, file);
            if (atlas->get_subcommand("verify")->parsed()) {
                r.command = "atlas verify";
                if (proj.size() == 2) r.inputs["proj"] = proj;
                if (pi_line) r.inputs["pi"] = true;
                if (!file.empty()) r.inputs["file"] = file;
                cmd_atlas_verify(r, a);
            } else {
                std::string text = atl::atlas_to_json(a);
                if (out_path.empty()) {
                    std::cout << text;
                } else {
                    std::ofstream outf(out_path, std::ios::binary);
                    if (!outf) throw SymError("cannot write '" + out_path + "'");
                    outf << text;
                }
                return 0;
            }
        } else if (susy_cmd->parsed()) {
            if (sc->parsed()) {
                r.command = "susy check";
                r.inputs["field"] = field;
                cmd_susy_check(r, field);
            } else if (scanon->parsed()) {
                r.command = "susy canon";
                r.inputs["field"] = field;
                cmd_susy_canon(r, field);
            } else if (sauto->parsed()) {
                r.command = "susy auto";
                r.inputs["f"] = f_text;
                r.inputs["g"] = g_text;
                cmd_susy_auto(r, f_text, g_text);
            } else {
                r.command = "susy elliptic-gens";
                r.inputs["tau"] = tau_text;
                r.inputs["sa"] = sa;
                r.inputs["sb"] = sb;
                cmd_susy_elliptic_gens(r, tau_text, sa, sb);
            }
        } else if (theta->parsed()) {
            if (tdeg->parsed()) {
                r.command = "theta degree";
                r.inputs["pi"] = theta_pi;
                cmd_theta_degree(r, theta_pi);
            } else if (tsqrt->parsed()) {
                r.command = "theta sqrt";
                r.inputs["pi"] = theta_pi;
                cmd_theta_sqrt(r, theta_pi);
            } else {
                r.command = "theta build";
                r.inputs["sign"] = theta_sign;
                cmd_theta_build(r, theta_sign);
            }
        } else if (fop_cmd->parsed()) {
            r.inputs["seed"] = seed;
            if (frt->parsed()) {
                r.command = "fop roundtrip";
                r.inputs["cases"] = cases_rt;
                cmd_fop_roundtrip(r, seed, cases_rt);
            } else if (fgl->parsed()) {
                r.command = "fop pi-glue";
                r.inputs["cases"] = cases_glue;
                cmd_fop_pi_glue(r, seed, cases_glue);
            } else {
                r.command = "fop phi-check";
                r.inputs["cases"] = cases_phi;
                cmd_fop_phi_check(r, seed, cases_phi);
            }
        } else if (ecmd->parsed()) {
            auto tau = parse_complex(tau_cx);
            r.inputs["tau"] = tau_cx;
            if (ev->parsed()) {
                r.command = "elliptic verify";
                r.inputs["samples"] = samples;
                r.inputs["eps"] = eps;
                cmd_elliptic_verify(r, tau, samples, eps, seed);
            } else {
                r.command = "elliptic invariants";
                r.inputs["eps"] = eps;
                cmd_elliptic_invariants(r, tau, eps);
            }
        } else if (pcmd->parsed()) {
            r.command = "parse";
            r.inputs["chart"] = chart_text;
            r.inputs["expr"] = expr_text;
            cmd_parse(r, chart_text, expr_text, as_vf);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const sym::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const SymError& e) {
        r.add("error", false, e.what());
        emit(r, as_json);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return emit(r, as_json);
}
