#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>

#include "infopt/mc.hpp"
#include "infopt/model.hpp"
#include "infopt/pde.hpp"

namespace infopt {

enum class Method : std::uint8_t { MonteCarlo, PDE };

[[nodiscard]] std::string_view to_string(Method method) noexcept;

struct PriceEstimate {
    double price = 0.0;
    double std_error = 0.0;  // 0 for the PDE method
    std::int64_t n_paths = 0;
    Method method = Method::MonteCarlo;
    double undiscounted_mean = 0.0;  // per unit notional
};

[[nodiscard]] double discount_factor(const OptionTerms& terms) noexcept;

// Neumaier-compensated sum in index order.
[[nodiscard]] double compensated_sum(std::span<const double> values) noexcept;

// Throws EmptySample.
[[nodiscard]] PriceEstimate price_mc(const TerminalSample& sample, const OptionTerms& terms);

// Expects a surface solved to tau = expiry; throws OutOfDomain via
// interpolation.
[[nodiscard]] PriceEstimate price_pde(const ValueSurface& surface, const SirState& s0, const OptionTerms& terms);

struct McEngine {
    SimulationPlan plan;
};

struct PdeEngine {
    Grid2D grid;
    Model model = Model::OneFactor;
    PdeSettings settings;
};

using EngineConfig = std::variant<McEngine, PdeEngine>;

// Prices one option end to end with either engine.
[[nodiscard]] PriceEstimate price_option(const EpidemicParams& p, const SirState& s0, const OptionTerms& terms,
                                         const EngineConfig& engine);

struct BumpSizes {
    double y0 = 1e-4;
    double x0 = 1e-4;
    double sigma = 1e-3;
};

struct GreekEstimate {
    double value = 0.0;
    double std_error = 0.0;  // 0 for the PDE engine
};

struct Greeks {
    GreekEstimate d_y0;
    GreekEstimate d_x0;
    GreekEstimate d_sigma;
};

// Central bump-and-reprice. Monte Carlo bumps reuse the plan's seed for both
// legs (common random numbers) unless `common_random_numbers` is false, in
// which case the down leg runs on seed + 1. Bumps that would leave the
// admissible state space fall back to one-sided differences.
[[nodiscard]] Greeks greeks_bump(const EpidemicParams& p, const SirState& s0, const OptionTerms& terms,
                                 const EngineConfig& engine, const BumpSizes& bumps = {},
                                 bool common_random_numbers = true);

}  // namespace infopt
