#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "infopt/error.hpp"
#include "infopt/scenario.hpp"

namespace {

constexpr int exit_usage = 2;
constexpr int exit_guard = 3;

struct Overrides {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::optional<int> paths;
    std::optional<int> workers;
    std::string grid;
    std::string out;
    std::string format;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
    cmd->add_option("--seed", o.seed, "Override the Monte Carlo seed");
    cmd->add_option("--paths", o.paths, "Override the number of Monte Carlo paths")->check(CLI::PositiveNumber);
    cmd->add_option("--workers", o.workers, "Worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
    cmd->add_option("--grid", o.grid, "Override the PDE grid as nx,ny,nt");
    cmd->add_option("--out", o.out, "Output file (default: standard output)");
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

infopt::Scenario load(const Overrides& o) {
    infopt::Scenario s = infopt::parse_scenario_file(o.scenario);
    if (o.seed) s.plan.seed = *o.seed;
    if (o.paths) s.plan.n_paths = *o.paths;
    if (o.workers) s.plan.workers = *o.workers;
    if (!o.grid.empty()) {
        std::istringstream in(o.grid);
        int nx = 0, ny = 0, nt = 0;
        char c1 = 0, c2 = 0;
        if (!(in >> nx >> c1 >> ny >> c2 >> nt) || c1 != ',' || c2 != ',' || !in.eof() || nx < 1 || ny < 1 ||
            nt < 1) {
            throw infopt::Error(infopt::ErrorKind::ValidationError, "--grid expects nx,ny,nt, got '" + o.grid + "'");
        }
        s.grid.n_x = nx;
        s.grid.n_y = ny;
        s.grid.n_time = nt;
    }
    if (o.format == "csv") s.format = infopt::OutputFormat::Csv;
    if (o.format == "json") s.format = infopt::OutputFormat::Json;
    return s;
}

void emit(const Overrides& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(o.out, std::ios::binary);
    if (!(file << text)) throw std::runtime_error("cannot write '" + o.out + "'");
}

std::string ode_text(const infopt::Scenario& s) {
    std::ostringstream out;
    const infopt::OdePath path = infopt::run_ode(s);
    if (s.format == infopt::OutputFormat::Json) {
        infopt::write_ode_json(out, path);
    } else {
        infopt::write_ode_csv(out, path);
    }
    return out.str();
}

int exit_code(infopt::ErrorKind kind) {
    switch (kind) {
        case infopt::ErrorKind::StepCountTooSmall:
        case infopt::ErrorKind::DegenerateStart:
        case infopt::ErrorKind::GridTooCoarse:
        case infopt::ErrorKind::UnstableConfiguration:
        case infopt::ErrorKind::EmptySample:
            return exit_guard;
        default:
            return exit_usage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Infection option pricer"};
    app.require_subcommand(1);

    Overrides price_opts, ode_opts, surface_opts, config_opts;
    bool timing = false;
    std::optional<double> surface_strike, surface_maturity;

    auto* price = app.add_subcommand("price", "Price every (strike, maturity) pair of the scenario");
    add_common(price, price_opts);
    price->add_flag("--timing", timing, "Fill wall_ms with measured times (output is no longer reproducible)");

    auto* ode = app.add_subcommand("ode", "Deterministic SIR path to the longest maturity");
    add_common(ode, ode_opts);

    auto* surface = app.add_subcommand("surface", "PDE value surface for one option");
    add_common(surface, surface_opts);
    surface->add_option("--strike", surface_strike, "Strike (default: first in the scenario)");
    surface->add_option("--maturity", surface_maturity, "Maturity (default: first in the scenario)");

    auto* config = app.add_subcommand("print-config", "Print the fully defaulted scenario as JSON");
    add_common(config, config_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (price->parsed()) {
            const infopt::Scenario s = load(price_opts);
            if (s.engine == infopt::EngineChoice::Ode) {
                emit(price_opts, ode_text(s));
                return 0;
            }
            const auto rows = infopt::run_scenario(s, {timing});
            std::ostringstream out;
            if (s.format == infopt::OutputFormat::Json) {
                infopt::write_results_json(out, rows);
            } else {
                infopt::write_results_csv(out, rows);
            }
            emit(price_opts, out.str());
        } else if (ode->parsed()) {
            emit(ode_opts, ode_text(load(ode_opts)));
        } else if (surface->parsed()) {
            const infopt::Scenario s = load(surface_opts);
            const double k = surface_strike.value_or(s.strikes.front());
            const double t = surface_maturity.value_or(s.maturities.front());
            infopt::validate(s.terms(k, t));
            const infopt::ValueSurface v = infopt::run_surface(s, k, t);
            std::ostringstream out;
            if (s.format == infopt::OutputFormat::Json) {
                infopt::write_surface_json(out, v);
            } else {
                infopt::write_surface_csv(out, v);
            }
            emit(surface_opts, out.str());
        } else if (config->parsed()) {
            emit(config_opts, infopt::scenario_to_json(load(config_opts)));
        }
    } catch (const infopt::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
