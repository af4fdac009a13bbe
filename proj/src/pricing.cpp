#include "infopt/pricing.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "infopt/error.hpp"

namespace infopt {

std::string_view to_string(Method method) noexcept {
    return method == Method::MonteCarlo ? "MonteCarlo" : "PDE";
}

double discount_factor(const OptionTerms& terms) noexcept {
    return std::exp(-terms.discount_rate * terms.expiry);
}

double compensated_sum(std::span<const double> values) noexcept {
    double sum = 0.0;
    double compensation = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }
    return sum + compensation;
}

namespace {

struct MeanAndError {
    double mean = 0.0;
    double std_error = 0.0;
};

MeanAndError mean_and_error(std::span<const double> values) {
    const auto n = static_cast<double>(values.size());
    MeanAndError out;
    out.mean = compensated_sum(values) / n;
    if (values.size() > 1) {
        std::vector<double> squares(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double d = values[i] - out.mean;
            squares[i] = d * d;
        }
        out.std_error = std::sqrt(compensated_sum(squares) / (n - 1.0) / n);
    }
    return out;
}

std::vector<double> path_payoffs(const TerminalSample& sample, const OptionTerms& terms) {
    std::vector<double> out(sample.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = payoff(terms, sample.y_terminal[i]);
    return out;
}

TerminalSample simulate(const EpidemicParams& p, const SirState& s0, const OptionTerms& terms,
                        const SimulationPlan& plan) {
    return simulate_terminal(p, s0, terms.expiry, plan);
}

// Where to evaluate a central difference without leaving [lower, upper].
struct BumpLegs {
    double down = 0.0;
    double up = 0.0;
};

BumpLegs bump_legs(double value, double h, double lower, double upper, bool open_lower) {
    BumpLegs legs{value - h, value + h};
    const bool down_ok = open_lower ? legs.down > lower : legs.down >= lower;
    if (!down_ok) legs.down = value;
    if (legs.up > upper) legs.up = value;
    if (legs.down == legs.up) throw OutOfRangeError("bump", "room for at least a one-sided difference");
    return legs;
}

GreekEstimate mc_difference(const TerminalSample& up, const TerminalSample& down, const OptionTerms& terms,
                            double width, bool paired) {
    const double scale = discount_factor(terms) * terms.notional / width;
    const std::vector<double> up_payoffs = path_payoffs(up, terms);
    const std::vector<double> down_payoffs = path_payoffs(down, terms);
    if (paired) {
        std::vector<double> diffs(up_payoffs.size());
        for (std::size_t i = 0; i < diffs.size(); ++i) diffs[i] = up_payoffs[i] - down_payoffs[i];
        const MeanAndError d = mean_and_error(diffs);
        return {d.mean * scale, d.std_error * scale};
    }
    const MeanAndError u = mean_and_error(up_payoffs);
    const MeanAndError d = mean_and_error(down_payoffs);
    return {(u.mean - d.mean) * scale, std::hypot(u.std_error, d.std_error) * scale};
}

}  // namespace

PriceEstimate price_mc(const TerminalSample& sample, const OptionTerms& terms) {
    if (sample.size() == 0) throw Error(ErrorKind::EmptySample, "no terminal samples");
    const MeanAndError stats = mean_and_error(path_payoffs(sample, terms));
    const double scale = discount_factor(terms) * terms.notional;
    PriceEstimate est;
    est.method = Method::MonteCarlo;
    est.n_paths = static_cast<std::int64_t>(sample.size());
    est.undiscounted_mean = stats.mean;
    est.price = discount_factor(terms) * stats.mean * terms.notional;
    est.std_error = stats.std_error * scale;
    return est;
}

PriceEstimate price_pde(const ValueSurface& surface, const SirState& s0, const OptionTerms& terms) {
    PriceEstimate est;
    est.method = Method::PDE;
    est.undiscounted_mean = interpolate_surface(surface, s0.x, s0.y);
    est.price = discount_factor(terms) * est.undiscounted_mean * terms.notional;
    return est;
}

PriceEstimate price_option(const EpidemicParams& p, const SirState& s0, const OptionTerms& terms,
                           const EngineConfig& engine) {
    validate(terms);
    if (const auto* mc = std::get_if<McEngine>(&engine)) {
        return price_mc(simulate(p, s0, terms, mc->plan), terms);
    }
    const auto& pde = std::get<PdeEngine>(engine);
    validate(s0);
    return price_pde(pde_solve(p, terms, pde.grid, pde.model, pde.settings), s0, terms);
}

Greeks greeks_bump(const EpidemicParams& p, const SirState& s0, const OptionTerms& terms,
                   const EngineConfig& engine, const BumpSizes& bumps, bool common_random_numbers) {
    validate_params(p, s0);
    validate(terms);
    if (!(bumps.y0 > 0.0 && bumps.x0 > 0.0 && bumps.sigma > 0.0)) {
        throw OutOfRangeError("bump", "bump sizes > 0");
    }
    const auto mc = std::get_if<McEngine>(&engine);
    // Monte Carlo needs strictly positive fractions for the log transform.
    const bool open_lower = mc != nullptr;
    const BumpLegs y_legs = bump_legs(s0.y, bumps.y0, 0.0, 1.0, open_lower);
    const BumpLegs x_legs = bump_legs(s0.x, bumps.x0, 0.0, 1.0, open_lower);
    const BumpLegs s_legs = bump_legs(p.sigma, bumps.sigma, 0.0, std::numeric_limits<double>::infinity(), false);

    EpidemicParams p_up = p;
    EpidemicParams p_down = p;
    p_up.sigma = s_legs.up;
    p_down.sigma = s_legs.down;

    Greeks g;
    if (mc) {
        SimulationPlan down_plan = mc->plan;
        if (!common_random_numbers) down_plan.seed = mc->plan.seed + 1;
        const auto diff = [&](const EpidemicParams& pu, const SirState& su, const EpidemicParams& pd,
                              const SirState& sd, double width) {
            return mc_difference(simulate(pu, su, terms, mc->plan), simulate(pd, sd, terms, down_plan), terms, width,
                                 common_random_numbers);
        };
        g.d_y0 = diff(p, {s0.x, y_legs.up}, p, {s0.x, y_legs.down}, y_legs.up - y_legs.down);
        g.d_x0 = diff(p, {x_legs.up, s0.y}, p, {x_legs.down, s0.y}, x_legs.up - x_legs.down);
        g.d_sigma = diff(p_up, s0, p_down, s0, s_legs.up - s_legs.down);
        return g;
    }

    const auto& pde = std::get<PdeEngine>(engine);
    const double scale = discount_factor(terms) * terms.notional;
    const ValueSurface base = pde_solve(p, terms, pde.grid, pde.model, pde.settings);
    g.d_y0.value = scale *
                   (interpolate_surface(base, s0.x, y_legs.up) - interpolate_surface(base, s0.x, y_legs.down)) /
                   (y_legs.up - y_legs.down);
    g.d_x0.value = scale *
                   (interpolate_surface(base, x_legs.up, s0.y) - interpolate_surface(base, x_legs.down, s0.y)) /
                   (x_legs.up - x_legs.down);
    const ValueSurface up = pde_solve(p_up, terms, pde.grid, pde.model, pde.settings);
    const ValueSurface down = pde_solve(p_down, terms, pde.grid, pde.model, pde.settings);
    g.d_sigma.value = scale *
                      (interpolate_surface(up, s0.x, s0.y) - interpolate_surface(down, s0.x, s0.y)) /
                      (s_legs.up - s_legs.down);
    return g;
}

}  // namespace infopt
