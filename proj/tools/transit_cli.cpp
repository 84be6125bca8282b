// transit: run transition scenarios, the property suite, and SVG plots.
// Exit codes: 0 ok, 1 computation or scenario failure, 2 input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "transit/errors.hpp"
#include "transit/json_io.hpp"
#include "transit/plot.hpp"
#include "transit/scenarios.hpp"
#include "transit/suite.hpp"

using namespace transit;

namespace {

struct GridFlags {
    std::optional<double> t_min, t_max;
    std::optional<int> t_steps;

    std::vector<double> grid(double lo, double hi, int steps) const
    {
        return t_grid(t_min.value_or(lo), t_max.value_or(hi), t_steps.value_or(steps));
    }
};

void add_grid(CLI::App* cmd, GridFlags& g)
{
    cmd->add_option("--t-min", g.t_min, "first t");
    cmd->add_option("--t-max", g.t_max, "last t");
    cmd->add_option("--t-steps", g.t_steps, "number of grid points");
}

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open " + path + " for writing");
    f << text;
}

SuiteConfig load_config(const std::string& path)
{
    SuiteConfig cfg;
    if (path.empty()) return cfg;
    nlohmann::json j = read_json_file(path);
    if (!j.is_object()) throw InputError("config must be a JSON object");
    try {
        if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("dim")) cfg.dim = j.at("dim").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad config value: ") + e.what());
    }
    return cfg;
}

TransitionReport report_from_file(const std::string& path)
{
    nlohmann::json j = read_json_file(path);
    if (j.is_object() && j.contains("transition")) return transition_report_from_json(j.at("transition"));
    return transition_report_from_json(j);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hyperbolic / half-pipe / AdS transition toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::optional<int> dim;
    app.add_option("--config", config_path, "JSON file with tol, seed, dim");
    app.add_option("--tol", tol, "residual tolerance for verify (default 1e-9)");
    app.add_option("--seed", seed, "seed for the random suites");
    app.add_option("--dim", dim, "model dimension for the isomorphism suite (2 or 3)");
    app.add_option("--out", out, "output path (default stdout)");

    CLI::App* verify = app.add_subcommand("verify", "run the property suite, JSON report on stdout");

    CLI::App* torus = app.add_subcommand("torus", "singular torus transition table");
    GridFlags torus_grid;
    std::string torus_svg;
    add_grid(torus, torus_grid);
    torus->add_option("--svg", torus_svg, "also write an SVG plot");

    CLI::App* twomm = app.add_subcommand("build-2mm", "(2,m,m) HP structure and its regeneration");
    GridFlags twomm_grid;
    int m = 5;
    double theta_dot = 1.0;
    std::string twomm_svg;
    twomm->add_option("--m", m, "polygon order");
    twomm->add_option("--theta-dot", theta_dot, "rate of the alpha rotation");
    twomm->add_option("--svg", twomm_svg, "also write an SVG plot");
    add_grid(twomm, twomm_grid);

    CLI::App* borr = app.add_subcommand("borromean", "Borromean rings variety and flexibility run");
    GridFlags borr_grid;
    std::optional<double> la, lb;
    std::string branch = "T";
    double epsilon = 0.0;
    borr->add_option("--la", la, "translation length of a (default: rectangular locus)");
    borr->add_option("--lb", lb, "translation length of b (default: rectangular locus)");
    borr->add_option("--branch", branch, "T or R");
    borr->add_option("--epsilon", epsilon, "second-order obstruction parameter");
    add_grid(borr, borr_grid);

    CLI::App* plot = app.add_subcommand("plot", "SVG of a transition report");
    std::string plot_in, plot_out;
    plot->add_option("input", plot_in, "transition report JSON")->required();
    plot->add_option("--output", plot_out, "SVG path (default --out, then stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        SuiteConfig cfg = load_config(config_path);
        if (tol) cfg.tol = *tol;
        if (seed) cfg.seed = *seed;
        if (dim) cfg.dim = *dim;
        if (!(cfg.tol > 0)) throw InputError("tol must be positive");
        if (cfg.dim != 2 && cfg.dim != 3) throw InputError("dim must be 2 or 3");

        if (*verify) {
            std::vector<Check> checks = all_checks(cfg);
            nlohmann::json arr = nlohmann::json::array();
            std::map<std::string, bool> by_criterion;
            bool ok = true;
            for (const Check& c : checks) {
                arr.push_back(to_json(c));
                auto key = std::to_string(c.criterion);
                by_criterion[key] = by_criterion.count(key) ? by_criterion[key] && c.passed : c.passed;
                ok = ok && c.passed;
            }
            nlohmann::json j{{"config", {{"tol", cfg.tol}, {"seed", cfg.seed}, {"dim", cfg.dim}}},
                             {"passed", ok},
                             {"criteria", by_criterion},
                             {"checks", arr}};
            write_text(out, dump_json(j));
            return ok ? 0 : 1;
        }
        if (*torus) {
            TorusSummary s = torus_scenario(torus_grid.grid(-0.1, 0.1, 5));
            write_text(out, dump_json(to_json(s.report)));
            if (!torus_svg.empty()) write_text(torus_svg, render_svg(s.report));
            return 0;
        }
        if (*twomm) {
            TwoMMReport r = build_2mm(m, theta_dot);
            TwoMMTransition tr = transition_2mm(r, twomm_grid.grid(-1e-3, 1e-3, 3));
            nlohmann::json j{{"construction", to_json(r)},
                             {"h1",
                              {{"z1", tr.h1.z1},
                               {"b1", tr.h1.b1},
                               {"h1", tr.h1.h1},
                               {"caveat", "presentation built from the gluing equations; completeness not established"}}},
                             {"transition", to_json(tr.report)}};
            write_text(out, dump_json(j));
            if (!twomm_svg.empty()) write_text(twomm_svg, render_svg(tr.report));
            return 0;
        }
        if (*borr) {
            double l0 = rectangular_length();
            BorromeanRep rep = borromean_rep(la.value_or(l0), lb.value_or(l0), branch_from_string(branch));
            FlexReport f = borromean_flexibility(epsilon, borr_grid.grid(-1e-3, 1e-3, 2));
            nlohmann::json j{{"representation", to_json(rep)}, {"flexibility", to_json(f)}};
            write_text(out, dump_json(j));
            return 0;
        }
        if (*plot) {
            TransitionReport r = report_from_file(plot_in);
            write_text(plot_out.empty() ? out : plot_out, render_svg(r));
            return 0;
        }
    } catch (const InputError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "Error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
