// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. argv[1] is the path of the infopt CLI binary.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "infopt/mc.hpp"
#include "infopt/ode.hpp"
#include "infopt/pricing.hpp"
#include "infopt/random.hpp"

using namespace infopt;

namespace {

const EpidemicParams kOneFactor{0.3, 0.1, 0.2, 0.0, 0.0};
const EpidemicParams kTwoFactor{0.3, 0.1, 0.2, 0.1, -0.3};
const SirState kStart{0.99, 0.01};

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string format(const char* fmt, auto... args) {
    char buffer[512];
    std::snprintf(buffer, sizeof buffer, fmt, args...);
    return buffer;
}

SimulationPlan make_plan(Model model, int n_paths, int n_steps, std::uint64_t seed) {
    SimulationPlan plan;
    plan.model = model;
    plan.n_paths = n_paths;
    plan.n_steps = n_steps;
    plan.seed = seed;
    return plan;
}

double mean(const std::vector<double>& v) { return compensated_sum(v) / static_cast<double>(v.size()); }

// 1. sigma = 0 Monte Carlo reproduces RK4 on every path.
Outcome deterministic_reduction() {
    const Stopwatch clock;
    const EpidemicParams p{0.3, 0.1, 0.0, 0.0, 0.0};
    const TerminalSample s = simulate_terminal(p, kStart, 50.0, make_plan(Model::OneFactor, 10000, 1000, 1));
    const double ode_y = integrate_sir(p, kStart, 50.0, 10000).terminal().y;
    double worst = 0.0;
    for (double y : s.y_terminal) worst = std::max(worst, std::abs(y - ode_y));
    const double elapsed = clock.seconds();
    return {worst <= 1e-3 && elapsed < 5.0,
            format("max |y_mc - y_ode| = %.3e over %zu paths (limit 1e-3), %.2f s (limit 5 s)", worst, s.size(),
                   elapsed)};
}

// 2. PDE prices within 3 MC standard errors over strikes x maturities x models.
Outcome cross_validation() {
    const Stopwatch clock;
    const double strikes[] = {0.01, 0.02, 0.05, 0.1, 0.2};
    const double maturities[] = {25.0, 50.0};
    int passed = 0;
    int total = 0;
    double worst_z = 0.0;
    std::string failures;
    for (Model model : {Model::OneFactor, Model::TwoFactor}) {
        const EpidemicParams& p = model == Model::OneFactor ? kOneFactor : kTwoFactor;
        // delta = 0.005 keeps the Euler bias far below one standard error.
        const std::vector<TerminalSample> samples =
            simulate_observations(p, kStart, maturities, make_plan(model, 100000, 10000, 20200317));
        for (std::size_t t = 0; t < std::size(maturities); ++t) {
            for (double k : strikes) {
                const OptionTerms terms{OptionKind::Call, k, maturities[t], 0.0, 1.0};
                const PriceEstimate mc = price_mc(samples[t], terms);
                const PriceEstimate pde = price_option(p, kStart, terms, PdeEngine{Grid2D{}, model, {}});
                const double z = (pde.price - mc.price) / mc.std_error;
                worst_z = std::max(worst_z, std::abs(z));
                ++total;
                if (std::abs(z) <= 3.0) {
                    ++passed;
                } else {
                    failures += format(" [%s T=%g K=%g pde %.6f mc %.6f +- %.6f, %+.2f se]",
                                       std::string(to_string(model)).c_str(), maturities[t], k, pde.price, mc.price,
                                       mc.std_error, z);
                }
            }
        }
    }
    const double elapsed = clock.seconds();
    return {passed == total && elapsed < 120.0,
            format("%d/%d within 3 se, worst %.2f se, %.1f s (limit 120 s)", passed, total, worst_z, elapsed) +
                failures};
}

// 3. Call - Put = df (mean Y_T - K) notional on one sample.
Outcome parity() {
    double worst = 0.0;
    for (Model model : {Model::OneFactor, Model::TwoFactor}) {
        const EpidemicParams& p = model == Model::OneFactor ? kOneFactor : kTwoFactor;
        const TerminalSample s = simulate_terminal(p, kStart, 50.0, make_plan(model, 100000, 1000, 7));
        const double mean_y = mean(s.y_terminal);
        for (double k : {0.0, 0.02, 0.2, 0.5}) {
            for (double r : {0.0, 0.03}) {
                const OptionTerms call{OptionKind::Call, k, 50.0, r, 2.5};
                const OptionTerms put{OptionKind::Put, k, 50.0, r, 2.5};
                const double lhs = price_mc(s, call).price - price_mc(s, put).price;
                const double rhs = std::exp(-r * 50.0) * (mean_y - k) * 2.5;
                worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
            }
        }
    }
    return {worst <= 1e-12, format("max relative gap %.3e (limit 1e-12)", worst)};
}

// 4. Weak order of E[Y_T] on coupled paths against a delta / 8 reference.
Outcome weak_order() {
    const Stopwatch clock;
    const EpidemicParams p{0.3, 0.1, 0.1, 0.0, 0.0};
    const double horizon = 50.0;
    const std::array<double, 4> deltas{0.2, 0.1, 0.05, 0.025};
    const double fine_delta = deltas.back() / 8.0;
    const int fine_steps = static_cast<int>(std::lround(horizon / fine_delta));
    const int n_paths = 20000;

    std::array<double, 4> sum{}, sum_sq{};
    std::int64_t floors = 0;
    std::vector<double> fine(fine_steps), coarse;
    for (int i = 0; i < n_paths; ++i) {
        SubStream rng(4, static_cast<std::uint64_t>(i));
        for (double& z : fine) z = rng.normal();
        const LogState start = to_log_state(kStart);
        const double y_ref =
            std::exp(-advance_path(p, Model::OneFactor, start, fine, {}, fine_delta, &floors).m);
        for (std::size_t d = 0; d < deltas.size(); ++d) {
            const int group = static_cast<int>(std::lround(deltas[d] / fine_delta));
            coarse.assign(fine_steps / group, 0.0);
            for (std::size_t n = 0; n < coarse.size(); ++n) {
                double acc = 0.0;
                for (int g = 0; g < group; ++g) acc += fine[n * group + g];
                coarse[n] = acc / std::sqrt(static_cast<double>(group));
            }
            const double y = std::exp(-advance_path(p, Model::OneFactor, start, coarse, {}, deltas[d], &floors).m);
            sum[d] += y - y_ref;
            sum_sq[d] += (y - y_ref) * (y - y_ref);
        }
    }

    // Least-squares slope of log |error| against log delta.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::string errors;
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        const double err = sum[d] / n_paths;
        const double se = std::sqrt((sum_sq[d] / n_paths - err * err) / (n_paths - 1));
        errors += format(" %g:%.3e(+-%.1e)", deltas[d], err, se);
        const double x = std::log(deltas[d]);
        const double y = std::log(std::abs(err));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(deltas.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double elapsed = clock.seconds();
    return {slope >= 0.8 && slope <= 1.2 && floors == 0 && elapsed < 60.0,
            format("slope %.3f (limit [0.8, 1.2]), floor events %lld, %.1f s (limit 60 s), errors", slope,
                   static_cast<long long>(floors), elapsed) +
                errors};
}

// 5. Two-factor with zeta = 0 is the one-factor model path by path.
Outcome degeneration() {
    SimulationPlan one = make_plan(Model::OneFactor, 1000, 500, 20200317);
    one.store_paths = true;
    SimulationPlan two = one;
    two.model = Model::TwoFactor;
    const TerminalSample a = simulate_terminal(kOneFactor, kStart, 50.0, one);
    const TerminalSample b = simulate_terminal({0.3, 0.1, 0.2, 0.0, -0.3}, kStart, 50.0, two);
    const bool same = a.x_paths == b.x_paths && a.y_paths == b.y_paths && a.x_terminal == b.x_terminal &&
                      a.y_terminal == b.y_terminal;
    return {same && a.size() == 1000, format("%zu paths x %d steps compared bitwise: %s", a.size(), one.n_steps,
                                             same ? "identical" : "different")};
}

// 6. Flooring keeps l, m >= 0, so X, Y stay in (0, 1].
Outcome flooring_and_bounds() {
    const EpidemicParams wild{0.3, 0.1, 0.8, 0.5, -0.3};
    const TerminalSample s = simulate_terminal(wild, kStart, 50.0, make_plan(Model::TwoFactor, 100000, 500, 6));
    bool inside = s.min_log_state >= 0.0 && std::isfinite(s.max_log_state) && std::exp(-s.max_log_state) > 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        inside = inside && s.x_terminal[i] > 0.0 && s.x_terminal[i] <= 1.0 && s.y_terminal[i] > 0.0 &&
                 s.y_terminal[i] <= 1.0;
    }
    return {inside, format("min log state %.3g, max log state %.3g, %lld floor events, min z_diagnostic %.6f",
                           s.min_log_state, s.max_log_state, static_cast<long long>(s.floor_events), s.min_z())};
}

// Root of ln(x / x0) = (beta / gamma) (x - 1) below gamma / beta.
double final_size_root(double beta, double gamma, double x0) {
    const auto f = [&](double x) { return std::log(x / x0) - beta / gamma * (x - 1.0); };
    double lo = 1e-12;
    double hi = gamma / beta;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// 7. ODE conservation and the final-size relation.
Outcome conservation() {
    double worst = integrate_sir(kOneFactor, kStart, 500.0, 10000).max_conservation_error;
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const EpidemicParams p{0.05 + 2.0 * unit(gen), 0.05 + unit(gen), 0.0, 0.0, 0.0};
        const double y0 = 1e-4 + 0.5 * unit(gen);
        const SirState s0{(1.0 - y0) * unit(gen), y0};
        worst = std::max(worst, integrate_sir(p, s0, 200.0, 2000).max_conservation_error);
    }
    const double x_inf = integrate_sir(kOneFactor, kStart, 500.0, 10000).terminal().x;
    const double gap = std::abs(x_inf - final_size_root(0.3, 0.1, 0.99));
    return {worst <= 1e-10 && gap <= 1e-6,
            format("max |x+y+z-1| %.3e (limit 1e-10), final-size gap %.3e (limit 1e-6)", worst, gap)};
}

// 8. Empirical covariance of correlated_pair draws.
Outcome correlation() {
    double worst = 0.0;
    for (double rho : {-0.9, 0.0, 0.5}) {
        SubStream rng(8, 0);
        const int n = 1000000;
        double su = 0.0, sv = 0.0, suu = 0.0, svv = 0.0, suv = 0.0;
        for (int i = 0; i < n; ++i) {
            const double a = rng.normal();
            const auto [u, v] = correlated_pair(a, rng.normal(), rho);
            su += u;
            sv += v;
            suu += u * u;
            svv += v * v;
            suv += u * v;
        }
        const double mu = su / n, mv = sv / n;
        worst = std::max({worst, std::abs(suu / n - mu * mu - 1.0), std::abs(svv / n - mv * mv - 1.0),
                          std::abs(suv / n - mu * mv - rho)});
    }
    return {worst <= 0.01, format("max entrywise covariance gap %.4f over 1e6 pairs (limit 0.01)", worst)};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

int run(const std::string& command) {
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 9. CLI CSV bytes repeat across runs and worker counts.
Outcome determinism(const std::string& cli) {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / ("infopt_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const std::filesystem::path scenario = dir / "scenario.json";
    std::ofstream(scenario) << R"({
  "beta": 0.3, "gamma": 0.1, "sigma": 0.2, "zeta": 0.1, "rho": -0.3,
  "x0": 0.99, "y0": 0.01,
  "strikes": [0.01, 0.05, 0.2], "maturities": [25, 50],
  "mc": {"n_paths": 20000, "n_steps": 500, "seed": 20200317},
  "pde": {"n_x": 41, "n_y": 41, "n_time": 40}
})";
    const auto price = [&](const std::string& name, const std::string& extra) {
        const std::filesystem::path out = dir / name;
        const int code = run(cli + " price --scenario " + scenario.string() + " --out " + out.string() + extra);
        return code == 0 ? read_file(out) : std::string();
    };
    const std::string first = price("a.csv", " --workers 1");
    const std::string second = price("b.csv", " --workers 1");
    const std::string threaded = price("c.csv", " --workers 4");
    const std::string other_seed = price("d.csv", " --workers 1 --seed 20200318");
    std::filesystem::remove_all(dir);
    const bool ok = !first.empty() && first == second && first == threaded && first != other_seed;
    return {ok, format("%zu CSV bytes; rerun %s, 4 workers %s, other seed %s", first.size(),
                       first == second ? "identical" : "different", first == threaded ? "identical" : "different",
                       first != other_seed ? "differs" : "same")};
}

// 10. At-the-money PDE price differences shrink under grid doubling.
Outcome grid_convergence() {
    double worst = std::numeric_limits<double>::infinity();
    std::string ratios;
    for (Model model : {Model::OneFactor, Model::TwoFactor}) {
        const EpidemicParams& p = model == Model::OneFactor ? kOneFactor : kTwoFactor;
        for (double t : {25.0, 50.0}) {
            double v[3];
            for (int n = 0; n < 3; ++n) {
                const int k = 1 << n;
                const PdeEngine engine{Grid2D{100 * k + 1, 100 * k + 1, 100 * k}, model, {}};
                v[n] = price_option(p, kStart, {OptionKind::Call, kStart.y, t, 0.0, 1.0}, engine).price;
            }
            const double ratio = std::abs(v[1] - v[0]) / std::abs(v[2] - v[1]);
            worst = std::min(worst, ratio);
            ratios += format(" %s/T=%g:%.2f", std::string(to_string(model)).c_str(), t, ratio);
        }
    }
    return {worst >= 1.7, format("min ratio %.3f (limit 1.7), ratios", worst) + ratios};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-infopt-cli>\n");
        return 2;
    }
    const std::string cli = argv[1];
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"deterministic reduction", deterministic_reduction},
        {"mc-pde cross-validation", cross_validation},
        {"put-call parity", parity},
        {"weak order", weak_order},
        {"zeta = 0 degeneration", degeneration},
        {"flooring and bounds", flooring_and_bounds},
        {"ode conservation", conservation},
        {"correlation", correlation},
        {"cli determinism", [&] { return determinism(cli); }},
        {"grid convergence", grid_convergence},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome = {false, std::string("threw: ") + e.what()};
        }
        failed += !outcome.pass;
        std::printf("%s %2zu %s: %s\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    outcome.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
