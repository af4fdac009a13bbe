#pragma once

#include <cstdint>
#include <string_view>
#include <utility>

namespace infopt {

enum class Model : std::uint8_t { OneFactor, TwoFactor };
enum class OptionKind : std::uint8_t { Call, Put };

[[nodiscard]] std::string_view to_string(Model model) noexcept;
[[nodiscard]] std::string_view to_string(OptionKind kind) noexcept;

// Rates are per unit time, volatilities per sqrt(unit time). The unit itself
// is whatever the scenario declares; nothing here converts.
struct EpidemicParams {
    double beta = 0.0;   // infection rate
    double gamma = 0.0;  // recovery rate
    double sigma = 0.0;  // volatility of the infection rate
    double zeta = 0.0;   // volatility of the recovery rate (0 in the one-factor model)
    double rho = 0.0;    // correlation between the two drivers

    friend bool operator==(const EpidemicParams&, const EpidemicParams&) = default;
};

// Susceptible and infected fractions. The recovered fraction is always
// derived from the conservation law and is never stored.
struct SirState {
    double x = 0.0;
    double y = 0.0;

    [[nodiscard]] constexpr double z() const noexcept { return 1.0 - x - y; }

    friend bool operator==(const SirState&, const SirState&) = default;
};

struct OptionTerms {
    OptionKind kind = OptionKind::Call;
    double strike = 0.0;         // fraction in [0, 1]
    double expiry = 0.0;         // T > 0
    double discount_rate = 0.0;  // r
    double notional = 1.0;
};

// Throws OutOfRangeError naming the first violated field.
void validate(const EpidemicParams& p);
void validate(const SirState& s);
void validate(const OptionTerms& terms);

// Checks both and hands them back unchanged.
std::pair<EpidemicParams, SirState> validate_params(const EpidemicParams& p, const SirState& s);

// Diffusion coefficient of the infected fraction in the two-factor model,
// sqrt(sigma^2 x^2 - 2 rho sigma zeta x + zeta^2). Equals sigma * x exactly
// when zeta is 0.
[[nodiscard]] double eta(double x, const EpidemicParams& p) noexcept;

// Instantaneous variance of log Y per unit time:
// (sigma x)^2 in the one-factor model, eta(x)^2 in the two-factor model.
// Both models share the zeta == 0 expression so they agree bit for bit.
[[nodiscard]] inline double infected_log_variance(double x, const EpidemicParams& p, Model model) noexcept {
    if (model == Model::OneFactor || p.zeta == 0.0) {
        const double sx = p.sigma * x;
        return sx * sx;
    }
    const double radicand = p.sigma * p.sigma * x * x - 2.0 * p.rho * p.sigma * p.zeta * x + p.zeta * p.zeta;
    // Nonnegative analytically; clamp the rounding residue at rho = +-1.
    return radicand > 0.0 ? radicand : 0.0;
}

// Undiscounted payoff per unit notional at terminal infected fraction y.
[[nodiscard]] constexpr double payoff(const OptionTerms& terms, double y) noexcept {
    const double intrinsic = terms.kind == OptionKind::Call ? y - terms.strike : terms.strike - y;
    return intrinsic > 0.0 ? intrinsic : 0.0;
}

}  // namespace infopt
