#include "infopt/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "infopt/error.hpp"

namespace infopt {

namespace {

struct Triple {
    double x, y, z;
};

Triple rates(const Triple& s, const EpidemicParams& p) noexcept {
    const double infections = p.beta * s.x * s.y;
    const double recoveries = p.gamma * s.y;
    return {-infections, infections - recoveries, recoveries};
}

Triple axpy(const Triple& s, double h, const Triple& k) noexcept {
    return {s.x + h * k.x, s.y + h * k.y, s.z + h * k.z};
}

}  // namespace

SirRates sir_derivative(const SirState& s, const EpidemicParams& p) noexcept {
    const Triple r = rates({s.x, s.y, s.z()}, p);
    return {r.x, r.y, r.z};
}

OdePath integrate_sir(const EpidemicParams& p, const SirState& s0, double horizon, int n_steps) {
    validate_params(p, s0);
    if (!(horizon > 0.0)) throw OutOfRangeError("horizon", "horizon > 0");
    if (n_steps < 1) {
        throw Error(ErrorKind::StepCountTooSmall, "n_steps must be >= 1");
    }
    const double h = horizon / n_steps;
    if (h * std::max(p.beta, p.gamma) > 0.5) {
        throw Error(ErrorKind::StepCountTooSmall,
                    "step " + std::to_string(h) + " exceeds 0.5 / max(beta, gamma)");
    }

    OdePath path;
    path.times.reserve(static_cast<std::size_t>(n_steps) + 1);
    path.states.reserve(static_cast<std::size_t>(n_steps) + 1);
    path.times.push_back(0.0);
    path.states.push_back(s0);

    // z is carried along as a self-test of the conservation law, then
    // dropped in favour of 1 - x - y.
    Triple s{s0.x, s0.y, s0.z()};
    for (int n = 1; n <= n_steps; ++n) {
        const Triple k1 = rates(s, p);
        const Triple k2 = rates(axpy(s, 0.5 * h, k1), p);
        const Triple k3 = rates(axpy(s, 0.5 * h, k2), p);
        const Triple k4 = rates(axpy(s, h, k3), p);
        const double w = h / 6.0;
        s.x += w * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        s.y += w * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
        s.z += w * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z);

        path.max_conservation_error = std::max(path.max_conservation_error, std::abs(s.x + s.y + s.z - 1.0));
        path.times.push_back(n == n_steps ? horizon : n * h);
        path.states.push_back({s.x, s.y});
    }
    return path;
}

}  // namespace infopt
