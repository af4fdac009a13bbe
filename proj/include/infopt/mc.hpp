#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "infopt/model.hpp"

namespace infopt {

// Log coordinates X = exp(-l), Y = exp(-m); both are floored at 0 after
// every step so that X, Y stay in (0, 1].
struct LogState {
    double l = 0.0;
    double m = 0.0;
};

struct SimulationPlan {
    Model model = Model::OneFactor;
    int n_paths = 100000;
    int n_steps = 500;
    std::uint64_t seed = 0;
    bool store_paths = false;
    // 0 picks std::thread::hardware_concurrency(). Results never depend on it.
    int workers = 0;

    [[nodiscard]] double delta(double horizon) const noexcept { return horizon / n_steps; }

    friend bool operator==(const SimulationPlan&, const SimulationPlan&) = default;
};

struct TerminalSample {
    std::vector<double> y_terminal;
    std::vector<double> x_terminal;
    std::vector<double> z_diagnostic;  // 1 - X_T - Y_T, unclipped

    // Flooring diagnostics over every step of every path.
    double min_log_state = 0.0;   // min over all l_n, m_n after flooring
    double max_log_state = 0.0;   // max over all l_n, m_n; X, Y >= exp(-max)
    std::int64_t floor_events = 0;  // steps where a raw l or m went negative

    // Row-major n_paths x (n_steps + 1) trajectories, only with store_paths.
    std::vector<double> x_paths;
    std::vector<double> y_paths;

    [[nodiscard]] std::size_t size() const noexcept { return y_terminal.size(); }
    [[nodiscard]] double min_z() const noexcept;
};

[[nodiscard]] LogState to_log_state(const SirState& s) noexcept;
[[nodiscard]] SirState to_sir_state(const LogState& s) noexcept;

// Log-Euler scheme for fixed (params, model, delta):
//   l' = l + (beta d + sigma sqrt(d) z) Y + sigma^2 d Y^2 / 2
//   m' = m + gamma d - (beta d + sigma sqrt(d) z) X [+ zeta sqrt(d) b] + eta(X)^2 d / 2
// with X = exp(-l), Y = exp(-m); eta(X) = sigma X in the one-factor model.
class EulerScheme {
public:
    EulerScheme(const EpidemicParams& p, Model model, double delta) noexcept;

    // One step before flooring, so callers can count floor events.
    [[nodiscard]] LogState step_raw(const LogState& s, double z, double b) const noexcept;

private:
    EpidemicParams params_;
    Model model_;
    double beta_delta_;
    double sigma_sqrt_delta_;
    double gamma_delta_;
    double zeta_sqrt_delta_;
    double half_delta_;
    double half_sigma2_delta_;
};

[[nodiscard]] LogState euler_step_raw(const LogState& s, const EpidemicParams& p, Model model, double z,
                                      double b, double delta) noexcept;

[[nodiscard]] constexpr LogState floor_at_zero(LogState s) noexcept {
    return {s.l > 0.0 ? s.l : 0.0, s.m > 0.0 ? s.m : 0.0};
}

[[nodiscard]] LogState euler_step_one_factor(const LogState& s, const EpidemicParams& p, double z,
                                             double delta) noexcept;
[[nodiscard]] LogState euler_step_two_factor(const LogState& s, const EpidemicParams& p, double z, double b,
                                             double delta) noexcept;

// Maps independent standard normals (u, v) to a pair with unit variances
// and correlation rho.
[[nodiscard]] std::pair<double, double> correlated_pair(double u, double v, double rho) noexcept;

// Path i draws z from SubStream(seed, i); the two-factor model draws the
// independent normal that becomes b from SubStream(seed, i + 2^63). Throws
// DegenerateStart if x0 or y0 is 0, StepCountTooSmall if
// delta * max(beta, gamma) > 0.5.
[[nodiscard]] TerminalSample simulate_terminal(const EpidemicParams& p, const SirState& s0, double horizon,
                                               const SimulationPlan& plan);

// Same paths observed at several times in one pass. plan.n_steps spans the
// largest time; every observation time must fall on a step boundary
// (OutOfRange otherwise). Each sample's flooring diagnostics cover the steps
// up to its own observation time.
[[nodiscard]] std::vector<TerminalSample> simulate_observations(const EpidemicParams& p, const SirState& s0,
                                                                std::span<const double> times,
                                                                const SimulationPlan& plan);

// Advances one path through caller-supplied normals; b may be empty for the
// one-factor model. Used for coupled-refinement studies where several step
// sizes share one Brownian path.
[[nodiscard]] LogState advance_path(const EpidemicParams& p, Model model, LogState s, std::span<const double> z,
                                    std::span<const double> b, double delta, std::int64_t* floor_events = nullptr);

}  // namespace infopt
