#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "infopt/mc.hpp"
#include "infopt/model.hpp"
#include "infopt/ode.hpp"
#include "infopt/pde.hpp"
#include "infopt/pricing.hpp"

namespace infopt {

enum class EngineChoice : std::uint8_t { Ode, MonteCarlo, Pde, Both };
enum class OutputFormat : std::uint8_t { Csv, Json };

[[nodiscard]] std::string_view to_string(EngineChoice engine) noexcept;
[[nodiscard]] std::string_view to_string(OutputFormat format) noexcept;

struct Scenario {
    std::string time_unit = "day";  // documentation only
    Model model = Model::OneFactor;
    EpidemicParams params;
    SirState initial;
    OptionKind kind = OptionKind::Call;
    std::vector<double> strikes;     // sorted ascending, nonempty
    std::vector<double> maturities;  // sorted ascending, nonempty
    double discount_rate = 0.0;
    double notional = 1.0;
    EngineChoice engine = EngineChoice::Both;
    SimulationPlan plan;  // n_steps is per maturity
    Grid2D grid;
    PdeSettings pde;
    int ode_steps = 10000;
    OutputFormat format = OutputFormat::Csv;

    [[nodiscard]] OptionTerms terms(double strike, double maturity) const noexcept {
        return {kind, strike, maturity, discount_rate, notional};
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Throws ParseError (malformed JSON, unknown keys, wrong types) or
// ValidationError (values outside the model's domain).
[[nodiscard]] Scenario parse_scenario(std::string_view text);
[[nodiscard]] Scenario parse_scenario_file(const std::string& path);

// Canonical JSON form; parse_scenario(scenario_to_json(s)) == s.
[[nodiscard]] std::string scenario_to_json(const Scenario& s);

struct ResultRow {
    double strike = 0.0;
    double maturity = 0.0;
    Method method = Method::MonteCarlo;
    double price = 0.0;
    double std_error = 0.0;
    std::int64_t n_paths = 0;
    double wall_ms = 0.0;
};

struct RunOptions {
    bool timing = false;  // wall_ms stays 0 unless set, keeping output reproducible
};

// One row per (strike, maturity, method), sorted by strike, maturity, method.
// Monte Carlo paths are shared across strikes of the same maturity.
[[nodiscard]] std::vector<ResultRow> run_scenario(const Scenario& s, const RunOptions& options = {});

// Deterministic path to the longest maturity.
[[nodiscard]] OdePath run_ode(const Scenario& s);

// Value surface for one (strike, maturity) pair.
[[nodiscard]] ValueSurface run_surface(const Scenario& s, double strike, double maturity);

// Twelve significant digits.
[[nodiscard]] std::string format_number(double value);

// CSV header: strike,maturity,method,price,stderr,n_paths,wall_ms
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_results_json(std::ostream& out, const std::vector<ResultRow>& rows);

// CSV header: t,x,y,z
void write_ode_csv(std::ostream& out, const OdePath& path);
void write_ode_json(std::ostream& out, const OdePath& path);

void write_surface_json(std::ostream& out, const ValueSurface& surface);

}  // namespace infopt
