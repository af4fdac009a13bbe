#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "infopt/model.hpp"

namespace infopt {

// Tensor grid on the unit square plus the number of backward steps.
//
// Each axis is either uniform (cluster <= 0) or sinh-stretched towards 0:
// node k sits at c * sinh(k / (n - 1) * asinh(1 / c)), so the spacing near 0
// is roughly c / (n - 1) * asinh(1 / c) and grows geometrically away from it.
// Small infected fractions need the stretching: option values there depend
// on log y, which a uniform mesh cannot resolve at y ~ 1e-2.
struct Grid2D {
    int n_x = 201;
    int n_y = 201;
    int n_time = 200;
    double x_cluster = 0.0;
    double y_cluster = 0.03;

    [[nodiscard]] double x(int i) const noexcept { return node(i, n_x, x_cluster); }
    [[nodiscard]] double y(int j) const noexcept { return node(j, n_y, y_cluster); }
    [[nodiscard]] std::vector<double> x_nodes() const;
    [[nodiscard]] std::vector<double> y_nodes() const;

    [[nodiscard]] static double node(int k, int n, double cluster) noexcept;

    friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

// Undiscounted option value per unit notional on the grid at time-to-expiry
// tau. Storage is x-major: values[i * n_y + j].
struct ValueSurface {
    Grid2D grid;
    double tau = 0.0;
    std::vector<double> values;

    [[nodiscard]] double at(int i, int j) const noexcept {
        return values[static_cast<std::size_t>(i) * grid.n_y + j];
    }
};

// Generator of the backward equation:
// a_x V_x + a_y V_y + d_xx V_xx + d_xy V_xy + d_yy V_yy.
struct PdeCoefficients {
    double a_x = 0.0;
    double a_y = 0.0;
    double d_xx = 0.0;
    double d_xy = 0.0;
    double d_yy = 0.0;
};

[[nodiscard]] PdeCoefficients pde_coefficients(double x, double y, const EpidemicParams& p, Model model) noexcept;

enum class AdiScheme : std::uint8_t { Douglas, CraigSneyd };

[[nodiscard]] std::string_view to_string(AdiScheme scheme) noexcept;

struct PdeSettings {
    // Implicitness of the ADI correctors. Values below 1/2 are only accepted
    // when the step also satisfies the fully explicit bound.
    double theta = 0.5;
    // Leading steps replaced by two backward-Euler half steps (Douglas,
    // theta = 1) that damp the payoff kink. Capped at n_time.
    int damping_steps = 2;
    // Cell Peclet number |a| h / d above which the x first derivative
    // switches from central to upwind differences.
    double peclet_limit = 2.0;
    // Douglas treats the mixed term explicitly and is first order in time;
    // Craig-Sneyd adds a mixed-term corrector that restores second order.
    AdiScheme scheme = AdiScheme::CraigSneyd;
    // Applies the Peclet switch to the y axis as well. Off by default: the
    // upwind diffusion near y = 0 biases prices far more than the small
    // central-difference undershoots it removes.
    bool upwind_y = false;

    friend bool operator==(const PdeSettings&, const PdeSettings&) = default;
};

// The tau = 0 layer: payoff(y) at every x.
[[nodiscard]] ValueSurface terminal_surface(const OptionTerms& terms, const Grid2D& grid);

// Marches the time-reversed backward equation from the payoff at tau = 0 to
// tau = expiry with ADI splitting (mixed derivative explicit). Throws
// GridTooCoarse or UnstableConfiguration.
[[nodiscard]] ValueSurface pde_solve(const EpidemicParams& p, const OptionTerms& terms, const Grid2D& grid,
                                     Model model, const PdeSettings& settings = {});

// Bilinear interpolation; throws OutOfDomain outside the unit square.
[[nodiscard]] double interpolate_surface(const ValueSurface& surface, double x0, double y0);

// CSV with header `tau,x,y,value`, x-major rows.
void write_surface_csv(std::ostream& out, const ValueSurface& surface);

}  // namespace infopt
