#pragma once

#include <vector>

#include "infopt/model.hpp"

namespace infopt {

struct SirRates {
    double dx = 0.0;
    double dy = 0.0;
    double dz = 0.0;
};

// Deterministic trajectory sampled at the integrator's fixed steps.
struct OdePath {
    std::vector<double> times;
    std::vector<SirState> states;

    [[nodiscard]] const SirState& terminal() const { return states.back(); }
    // Largest |x + y + z - 1| seen along the path, using the redundantly
    // integrated z.
    double max_conservation_error = 0.0;
};

[[nodiscard]] SirRates sir_derivative(const SirState& s, const EpidemicParams& p) noexcept;

// Classical fixed-step RK4 over [0, horizon]. Throws StepCountTooSmall when
// the step exceeds 0.5 / max(beta, gamma).
[[nodiscard]] OdePath integrate_sir(const EpidemicParams& p, const SirState& s0, double horizon,
                                    int n_steps);

}  // namespace infopt
