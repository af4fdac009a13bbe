#include "infopt/mc.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "infopt/error.hpp"
#include "infopt/parallel.hpp"
#include "infopt/random.hpp"

namespace infopt {

namespace {

// Streams with the top bit set carry the second driver's normals, so the
// infection-rate draws of path i are the same in both models.
constexpr std::uint64_t kSecondDriverStreams = std::uint64_t{1} << 63;

}  // namespace

double TerminalSample::min_z() const noexcept {
    double result = std::numeric_limits<double>::infinity();
    for (double z : z_diagnostic) result = std::min(result, z);
    return result;
}

LogState to_log_state(const SirState& s) noexcept { return {-std::log(s.x), -std::log(s.y)}; }

SirState to_sir_state(const LogState& s) noexcept { return {std::exp(-s.l), std::exp(-s.m)}; }

EulerScheme::EulerScheme(const EpidemicParams& p, Model model, double delta) noexcept
    : params_(p),
      model_(model),
      beta_delta_(p.beta * delta),
      sigma_sqrt_delta_(p.sigma * std::sqrt(delta)),
      gamma_delta_(p.gamma * delta),
      zeta_sqrt_delta_(p.zeta * std::sqrt(delta)),
      half_delta_(0.5 * delta),
      half_sigma2_delta_(0.5 * p.sigma * p.sigma * delta) {}

LogState EulerScheme::step_raw(const LogState& s, double z, double b) const noexcept {
    const double x = std::exp(-s.l);
    const double y = std::exp(-s.m);
    // Shared infection-rate shock beta*delta + sigma*sqrt(delta)*z.
    const double shock = beta_delta_ + sigma_sqrt_delta_ * z;

    LogState next;
    next.l = s.l + shock * y + half_sigma2_delta_ * (y * y);
    next.m = s.m + gamma_delta_ - shock * x;
    if (model_ == Model::TwoFactor) next.m += zeta_sqrt_delta_ * b;
    next.m += half_delta_ * infected_log_variance(x, params_, model_);
    return next;
}

LogState euler_step_raw(const LogState& s, const EpidemicParams& p, Model model, double z, double b,
                        double delta) noexcept {
    return EulerScheme(p, model, delta).step_raw(s, z, b);
}

LogState euler_step_one_factor(const LogState& s, const EpidemicParams& p, double z, double delta) noexcept {
    return floor_at_zero(euler_step_raw(s, p, Model::OneFactor, z, 0.0, delta));
}

LogState euler_step_two_factor(const LogState& s, const EpidemicParams& p, double z, double b,
                               double delta) noexcept {
    return floor_at_zero(euler_step_raw(s, p, Model::TwoFactor, z, b, delta));
}

std::pair<double, double> correlated_pair(double u, double v, double rho) noexcept {
    return {u, rho * u + std::sqrt(1.0 - rho * rho) * v};
}

LogState advance_path(const EpidemicParams& p, Model model, LogState s, std::span<const double> z,
                      std::span<const double> b, double delta, std::int64_t* floor_events) {
    const EulerScheme scheme(p, model, delta);
    for (std::size_t n = 0; n < z.size(); ++n) {
        const double bn = model == Model::TwoFactor ? b[n] : 0.0;
        const LogState raw = scheme.step_raw(s, z[n], bn);
        if (floor_events && (raw.l < 0.0 || raw.m < 0.0)) ++*floor_events;
        s = floor_at_zero(raw);
    }
    return s;
}

std::vector<TerminalSample> simulate_observations(const EpidemicParams& p, const SirState& s0,
                                                  std::span<const double> times, const SimulationPlan& plan) {
    validate_params(p, s0);
    if (times.empty()) throw OutOfRangeError("times", "at least one observation time");
    if (plan.n_paths < 1) throw OutOfRangeError("n_paths", "n_paths >= 1");
    if (plan.n_steps < 1) throw OutOfRangeError("n_steps", "n_steps >= 1");
    if (s0.x == 0.0 || s0.y == 0.0) {
        throw Error(ErrorKind::DegenerateStart, "log transform needs x0 > 0 and y0 > 0");
    }
    const double horizon = *std::max_element(times.begin(), times.end());
    if (!(horizon > 0.0)) throw OutOfRangeError("horizon", "horizon > 0");
    const double delta = plan.delta(horizon);
    if (delta * std::max(p.beta, p.gamma) > 0.5) {
        throw Error(ErrorKind::StepCountTooSmall,
                    "delta " + std::to_string(delta) + " exceeds 0.5 / max(beta, gamma)");
    }

    // Step index after which each observation is taken.
    std::vector<std::size_t> stops(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double steps = times[k] / delta;
        const double rounded = std::round(steps);
        if (!(times[k] > 0.0) || std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
            throw OutOfRangeError("times", "observation times on the step grid of the largest time");
        }
        stops[k] = static_cast<std::size_t>(rounded);
    }

    const auto n_paths = static_cast<std::size_t>(plan.n_paths);
    const auto n_steps = static_cast<std::size_t>(plan.n_steps);
    const auto n_obs = times.size();
    const bool two_factor = plan.model == Model::TwoFactor;

    std::vector<TerminalSample> out(n_obs);
    for (auto& sample : out) {
        sample.y_terminal.resize(n_paths);
        sample.x_terminal.resize(n_paths);
        sample.z_diagnostic.resize(n_paths);
    }
    if (plan.store_paths) {
        out.front().x_paths.resize(n_paths * (n_steps + 1));
        out.front().y_paths.resize(n_paths * (n_steps + 1));
    }
    // Per (observation, path) diagnostics, reduced in path order afterwards.
    std::vector<double> path_min(n_obs * n_paths);
    std::vector<double> path_max(n_obs * n_paths);
    std::vector<std::int64_t> path_floors(n_obs * n_paths);
    const LogState start = to_log_state(s0);
    const EulerScheme scheme(p, plan.model, delta);

    parallel_chunks(n_paths, plan.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            SubStream rng(plan.seed, i);
            SubStream rng_b(plan.seed, i | kSecondDriverStreams);
            LogState s = start;
            double lowest = std::min(s.l, s.m);
            double highest = std::max(s.l, s.m);
            std::int64_t floors = 0;
            double* xs = plan.store_paths ? out.front().x_paths.data() + i * (n_steps + 1) : nullptr;
            double* ys = plan.store_paths ? out.front().y_paths.data() + i * (n_steps + 1) : nullptr;
            if (xs) {
                xs[0] = s0.x;
                ys[0] = s0.y;
            }
            const auto record = [&](std::size_t n_done) {
                for (std::size_t k = 0; k < n_obs; ++k) {
                    if (stops[k] != n_done) continue;
                    const SirState state = to_sir_state(s);
                    out[k].x_terminal[i] = state.x;
                    out[k].y_terminal[i] = state.y;
                    out[k].z_diagnostic[i] = state.z();
                    path_min[k * n_paths + i] = lowest;
                    path_max[k * n_paths + i] = highest;
                    path_floors[k * n_paths + i] = floors;
                }
            };
            for (std::size_t n = 0; n < n_steps; ++n) {
                double z = rng.normal();
                double b = 0.0;
                if (two_factor) std::tie(z, b) = correlated_pair(z, rng_b.normal(), p.rho);
                const LogState raw = scheme.step_raw(s, z, b);
                if (raw.l < 0.0 || raw.m < 0.0) ++floors;
                s = floor_at_zero(raw);
                assert(s.l >= 0.0 && s.m >= 0.0);
                lowest = std::min(lowest, std::min(s.l, s.m));
                highest = std::max(highest, std::max(s.l, s.m));
                if (xs) {
                    xs[n + 1] = std::exp(-s.l);
                    ys[n + 1] = std::exp(-s.m);
                }
                record(n + 1);
            }
        }
    });

    for (std::size_t k = 0; k < n_obs; ++k) {
        const auto first = path_min.begin() + static_cast<std::ptrdiff_t>(k * n_paths);
        out[k].min_log_state = *std::min_element(first, first + static_cast<std::ptrdiff_t>(n_paths));
        const auto top = path_max.begin() + static_cast<std::ptrdiff_t>(k * n_paths);
        out[k].max_log_state = *std::max_element(top, top + static_cast<std::ptrdiff_t>(n_paths));
        for (std::size_t i = 0; i < n_paths; ++i) out[k].floor_events += path_floors[k * n_paths + i];
    }
    return out;
}

TerminalSample simulate_terminal(const EpidemicParams& p, const SirState& s0, double horizon,
                                 const SimulationPlan& plan) {
    const double times[] = {horizon};
    return std::move(simulate_observations(p, s0, times, plan).front());
}

}  // namespace infopt
