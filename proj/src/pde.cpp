#include "infopt/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "infopt/error.hpp"
#include "infopt/tridiagonal.hpp"

namespace infopt {

double Grid2D::node(int k, int n, double cluster) noexcept {
    if (k <= 0) return 0.0;
    if (k >= n - 1) return 1.0;
    const double xi = static_cast<double>(k) / (n - 1);
    if (cluster <= 0.0) return xi;
    return cluster * std::sinh(xi * std::asinh(1.0 / cluster));
}

std::vector<double> Grid2D::x_nodes() const {
    std::vector<double> out(n_x);
    for (int i = 0; i < n_x; ++i) out[i] = x(i);
    return out;
}

std::vector<double> Grid2D::y_nodes() const {
    std::vector<double> out(n_y);
    for (int j = 0; j < n_y; ++j) out[j] = y(j);
    return out;
}

namespace {

// Weights on (V[k-1], V[k], V[k+1]).
struct Stencil {
    double lo = 0.0;
    double mid = 0.0;
    double hi = 0.0;
};

// Second-order central first derivative on a nonuniform mesh.
Stencil central_first(double h_lo, double h_hi) {
    const double sum = h_lo + h_hi;
    return {-h_hi / (h_lo * sum), (h_hi - h_lo) / (h_lo * h_hi), h_lo / (h_hi * sum)};
}

// drift * V' + diffusion * V'' at an interior node. The first derivative is
// central while the cell Peclet number |drift| h / diffusion stays at or
// below the limit, upwind otherwise.
Stencil axis_stencil(double drift, double diffusion, double h_lo, double h_hi, double peclet_limit) {
    const double sum = h_lo + h_hi;
    Stencil s{2.0 * diffusion / (h_lo * sum), -2.0 * diffusion / (h_lo * h_hi), 2.0 * diffusion / (h_hi * sum)};
    const bool central = diffusion > 0.0 && std::abs(drift) * std::max(h_lo, h_hi) <= peclet_limit * diffusion;
    if (central) {
        const Stencil d = central_first(h_lo, h_hi);
        s.lo += drift * d.lo;
        s.mid += drift * d.mid;
        s.hi += drift * d.hi;
    } else if (drift > 0.0) {
        s.mid -= drift / h_hi;
        s.hi += drift / h_hi;
    } else {
        s.lo -= drift / h_lo;
        s.mid += drift / h_lo;
    }
    return s;
}

// Discrete operators of the time-reversed generator on the active nodes
// i in [0, n_x - 2], j in [0, n_y - 2]. Nodes on x = 1 or y = 1 are not
// unknowns: they are pinned by linear extrapolation from the two inner nodes.
class Operators {
public:
    Operators(const EpidemicParams& p, const Grid2D& grid, Model model, const PdeSettings& settings)
        : nx_(grid.n_x),
          ny_(grid.n_y),
          xs_(grid.x_nodes()),
          ys_(grid.y_nodes()),
          x_(count()),
          y_(count()),
          mixed_(count()),
          dx_(nx_),
          dy_(ny_) {
        for (int i = 1; i < nx_ - 1; ++i) dx_[i] = central_first(xs_[i] - xs_[i - 1], xs_[i + 1] - xs_[i]);
        for (int j = 1; j < ny_ - 1; ++j) dy_[j] = central_first(ys_[j] - ys_[j - 1], ys_[j + 1] - ys_[j]);
        x_ratio_ = (xs_[nx_ - 1] - xs_[nx_ - 2]) / (xs_[nx_ - 2] - xs_[nx_ - 3]);
        y_ratio_ = (ys_[ny_ - 1] - ys_[ny_ - 2]) / (ys_[ny_ - 2] - ys_[ny_ - 3]);
        const double x_limit = settings.peclet_limit;
        const double y_limit = settings.upwind_y ? settings.peclet_limit : std::numeric_limits<double>::infinity();

        for (int i = 0; i < nx_ - 1; ++i) {
            for (int j = 0; j < ny_ - 1; ++j) {
                const PdeCoefficients c = pde_coefficients(xs_[i], ys_[j], p, model);
                const std::size_t k = at(i, j);
                // On x = 0 and y = 0 the matching coefficients vanish, so no
                // outside neighbour is ever referenced.
                if (i > 0) {
                    x_[k] = axis_stencil(c.a_x, c.d_xx, xs_[i] - xs_[i - 1], xs_[i + 1] - xs_[i], x_limit);
                }
                if (j > 0) {
                    y_[k] = axis_stencil(c.a_y, c.d_yy, ys_[j] - ys_[j - 1], ys_[j + 1] - ys_[j], y_limit);
                }
                if (i > 0 && j > 0) mixed_[k] = c.d_xy;
                double mixed_rate = 0.0;
                if (i > 0 && j > 0) {
                    mixed_rate = std::abs(c.d_xy) * (std::abs(dx_[i].lo) + std::abs(dx_[i].mid) + std::abs(dx_[i].hi)) *
                                 (std::abs(dy_[j].lo) + std::abs(dy_[j].mid) + std::abs(dy_[j].hi));
                }
                max_explicit_rate_ = std::max(max_explicit_rate_, -x_[k].mid - y_[k].mid + mixed_rate);
            }
        }
    }

    [[nodiscard]] std::size_t at(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * ny_ + static_cast<std::size_t>(j);
    }

    [[nodiscard]] std::size_t count() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }

    [[nodiscard]] const std::vector<double>& y_nodes() const noexcept { return ys_; }

    // Largest explicit-Euler rate over the active nodes.
    [[nodiscard]] double max_explicit_rate() const noexcept { return max_explicit_rate_; }

    void apply_x(const std::vector<double>& v, std::vector<double>& out) const {
        for (int i = 0; i < nx_ - 1; ++i) {
            for (int j = 0; j < ny_ - 1; ++j) {
                const std::size_t k = at(i, j);
                const Stencil& s = x_[k];
                double acc = s.mid * v[k] + s.hi * v[k + ny_];
                if (i > 0) acc += s.lo * v[k - ny_];
                out[k] = acc;
            }
        }
    }

    void apply_y(const std::vector<double>& v, std::vector<double>& out) const {
        for (int i = 0; i < nx_ - 1; ++i) {
            for (int j = 0; j < ny_ - 1; ++j) {
                const std::size_t k = at(i, j);
                const Stencil& s = y_[k];
                double acc = s.mid * v[k] + s.hi * v[k + 1];
                if (j > 0) acc += s.lo * v[k - 1];
                out[k] = acc;
            }
        }
    }

    // d_xy * D_x D_y V with central first-derivative stencils on both axes.
    void apply_mixed(const std::vector<double>& v, std::vector<double>& out) const {
        for (int i = 0; i < nx_ - 1; ++i) {
            for (int j = 0; j < ny_ - 1; ++j) {
                const std::size_t k = at(i, j);
                if (i == 0 || j == 0) {
                    out[k] = 0.0;
                    continue;
                }
                const Stencil& wy = dy_[j];
                const auto d_y = [&](std::size_t c) { return wy.lo * v[c - 1] + wy.mid * v[c] + wy.hi * v[c + 1]; };
                const Stencil& wx = dx_[i];
                out[k] = mixed_[k] * (wx.lo * d_y(k - ny_) + wx.mid * d_y(k) + wx.hi * d_y(k + ny_));
            }
        }
    }

    // Solves (I - w A_x) u = rhs along every active row j; u may alias rhs.
    void solve_x(double w, const std::vector<double>& rhs, std::vector<double>& u) {
        const int n = nx_ - 1;
        resize_work(n);
        for (int j = 0; j < ny_ - 1; ++j) {
            for (int i = 0; i < n; ++i) {
                const Stencil& s = x_[at(i, j)];
                lower_[i] = -w * s.lo;
                diag_[i] = 1.0 - w * s.mid;
                upper_[i] = -w * s.hi;
                rhs_[i] = rhs[at(i, j)];
            }
            eliminate_extrapolated_end(n, x_ratio_);
            solve_tridiagonal(lower_, diag_, upper_, rhs_, sol_, scratch_);
            for (int i = 0; i < n; ++i) u[at(i, j)] = sol_[i];
        }
    }

    void solve_y(double w, const std::vector<double>& rhs, std::vector<double>& u) {
        const int n = ny_ - 1;
        resize_work(n);
        for (int i = 0; i < nx_ - 1; ++i) {
            for (int j = 0; j < n; ++j) {
                const Stencil& s = y_[at(i, j)];
                lower_[j] = -w * s.lo;
                diag_[j] = 1.0 - w * s.mid;
                upper_[j] = -w * s.hi;
                rhs_[j] = rhs[at(i, j)];
            }
            eliminate_extrapolated_end(n, y_ratio_);
            solve_tridiagonal(lower_, diag_, upper_, rhs_, sol_, scratch_);
            for (int j = 0; j < n; ++j) u[at(i, j)] = sol_[j];
        }
    }

    // Pins x = 1 and y = 1 by linear extrapolation (zero second derivative).
    void fill_far_boundaries(std::vector<double>& v) const {
        for (int i = 0; i < nx_ - 1; ++i) {
            const std::size_t k = at(i, ny_ - 1);
            v[k] = v[k - 1] + y_ratio_ * (v[k - 1] - v[k - 2]);
        }
        const auto stride = static_cast<std::size_t>(ny_);
        for (int j = 0; j < ny_; ++j) {
            const std::size_t k = at(nx_ - 1, j);
            v[k] = v[k - stride] + x_ratio_ * (v[k - stride] - v[k - 2 * stride]);
        }
    }

private:
    void resize_work(int n) {
        lower_.resize(n);
        diag_.resize(n);
        upper_.resize(n);
        rhs_.resize(n);
        sol_.resize(n);
        scratch_.resize(n);
    }

    // Folds V_n = (1 + r) V_{n-1} - r V_{n-2} into the last active row.
    void eliminate_extrapolated_end(int n, double ratio) {
        const double u = upper_[n - 1];
        lower_[n - 1] -= ratio * u;
        diag_[n - 1] += (1.0 + ratio) * u;
        upper_[n - 1] = 0.0;
    }

    int nx_;
    int ny_;
    std::vector<double> xs_;
    std::vector<double> ys_;
    std::vector<Stencil> x_;
    std::vector<Stencil> y_;
    std::vector<double> mixed_;
    std::vector<Stencil> dx_;
    std::vector<Stencil> dy_;
    double x_ratio_ = 1.0;
    double y_ratio_ = 1.0;
    double max_explicit_rate_ = 0.0;
    std::vector<double> lower_, diag_, upper_, rhs_, sol_, scratch_;
};

// Index of the cell [nodes[k], nodes[k + 1]] containing v.
int locate(const std::vector<double>& nodes, double v) {
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), v);
    const auto k = static_cast<int>(it - nodes.begin()) - 1;
    return std::clamp(k, 0, static_cast<int>(nodes.size()) - 2);
}

}  // namespace

std::string_view to_string(AdiScheme scheme) noexcept {
    return scheme == AdiScheme::Douglas ? "douglas" : "craig_sneyd";
}

PdeCoefficients pde_coefficients(double x, double y, const EpidemicParams& p, Model model) noexcept {
    PdeCoefficients c;
    const double y2 = y * y;
    const double sx = p.sigma * x;
    c.a_x = -p.beta * x * y;
    c.a_y = (p.beta * x - p.gamma) * y;
    c.d_xx = 0.5 * sx * sx * y2;
    if (model == Model::OneFactor || p.zeta == 0.0) {
        c.d_xy = -sx * sx * y2;
    } else {
        c.d_xy = -sx * y2 * (sx - p.rho * p.zeta);
    }
    c.d_yy = 0.5 * y2 * infected_log_variance(x, p, model);
    return c;
}

ValueSurface terminal_surface(const OptionTerms& terms, const Grid2D& grid) {
    ValueSurface surface;
    surface.grid = grid;
    surface.values.resize(static_cast<std::size_t>(grid.n_x) * grid.n_y);
    const std::vector<double> ys = grid.y_nodes();
    for (int i = 0; i < grid.n_x; ++i) {
        double* row = surface.values.data() + static_cast<std::size_t>(i) * grid.n_y;
        for (int j = 0; j < grid.n_y; ++j) row[j] = payoff(terms, ys[j]);
    }
    return surface;
}

ValueSurface pde_solve(const EpidemicParams& p, const OptionTerms& terms, const Grid2D& grid, Model model,
                       const PdeSettings& settings) {
    validate(p);
    validate(terms);
    if (grid.n_x < 3 || grid.n_y < 3) {
        throw Error(ErrorKind::GridTooCoarse, "n_x and n_y must be >= 3");
    }
    if (grid.n_time < 1) throw Error(ErrorKind::GridTooCoarse, "n_time must be >= 1");
    if (!(settings.theta >= 0.0 && settings.theta <= 1.0)) {
        throw Error(ErrorKind::UnstableConfiguration, "theta must lie in [0, 1]");
    }
    if (settings.damping_steps < 0) {
        throw OutOfRangeError("damping_steps", "damping_steps >= 0");
    }

    Operators ops(p, grid, model, settings);
    const double dt = terms.expiry / grid.n_time;
    // theta >= 1/2 keeps both schemes stable with an explicit mixed term;
    // below that the whole step has to satisfy the explicit bound.
    if (settings.theta < 0.5 && dt * ops.max_explicit_rate() > 1.0) {
        throw Error(ErrorKind::UnstableConfiguration,
                    "theta " + std::to_string(settings.theta) + " with dt " + std::to_string(dt) +
                        " violates the explicit stability bound");
    }

    ValueSurface surface = terminal_surface(terms, grid);

    std::vector<double>& v = surface.values;
    std::vector<double> ax(v.size()), ay(v.size()), amix(v.size()), work(v.size());

    std::vector<double> predicted, mixed_predicted;
    if (settings.scheme == AdiScheme::CraigSneyd) {
        predicted.resize(v.size());
        mixed_predicted.resize(v.size());
    }

    // Runs the two implicit correctors on work (which holds the explicit
    // predictor): (I - theta h A_x) Y1 = Y0 - theta h A_x V, then
    // (I - theta h A_y) out = Y1 - theta h A_y V.
    const auto correct = [&](double h, double theta, std::vector<double>& out) {
        ops.solve_x(theta * h, work, work);
        for (int i = 0; i < grid.n_x - 1; ++i) {
            for (int j = 0; j < grid.n_y - 1; ++j) {
                const std::size_t k = ops.at(i, j);
                work[k] -= theta * h * ay[k];
            }
        }
        ops.solve_y(theta * h, work, out);
        ops.fill_far_boundaries(out);
    };

    // Douglas predictor Y0 = V + h A V. Craig-Sneyd then re-predicts with
    // Y0 + h / 2 (A_xy Y2 - A_xy V) and corrects a second time.
    const auto step = [&](double h, double theta, AdiScheme scheme) {
        ops.apply_x(v, ax);
        ops.apply_y(v, ay);
        ops.apply_mixed(v, amix);
        const auto predict = [&] {
            for (int i = 0; i < grid.n_x - 1; ++i) {
                for (int j = 0; j < grid.n_y - 1; ++j) {
                    const std::size_t k = ops.at(i, j);
                    work[k] = v[k] + h * (amix[k] + (1.0 - theta) * ax[k] + ay[k]);
                }
            }
        };
        predict();
        if (scheme == AdiScheme::Douglas) {
            correct(h, theta, v);
            return;
        }
        correct(h, theta, predicted);
        ops.apply_mixed(predicted, mixed_predicted);
        predict();
        for (int i = 0; i < grid.n_x - 1; ++i) {
            for (int j = 0; j < grid.n_y - 1; ++j) {
                const std::size_t k = ops.at(i, j);
                work[k] += 0.5 * h * (mixed_predicted[k] - amix[k]);
            }
        }
        correct(h, theta, v);
    };

    for (int n = 0; n < grid.n_time; ++n) {
        if (n < settings.damping_steps) {
            step(0.5 * dt, 1.0, AdiScheme::Douglas);
            step(0.5 * dt, 1.0, AdiScheme::Douglas);
        } else {
            step(dt, settings.theta, settings.scheme);
        }
    }
    surface.tau = terms.expiry;
    return surface;
}

double interpolate_surface(const ValueSurface& surface, double x0, double y0) {
    if (!(x0 >= 0.0 && x0 <= 1.0 && y0 >= 0.0 && y0 <= 1.0)) {
        throw Error(ErrorKind::OutOfDomain,
                    "(" + std::to_string(x0) + ", " + std::to_string(y0) + ") lies outside the unit square");
    }
    const Grid2D& g = surface.grid;
    const std::vector<double> xs = g.x_nodes();
    const std::vector<double> ys = g.y_nodes();
    const int i = locate(xs, x0);
    const int j = locate(ys, y0);
    const double u = (x0 - xs[i]) / (xs[i + 1] - xs[i]);
    const double w = (y0 - ys[j]) / (ys[j + 1] - ys[j]);
    // Exact node hits return the stored value untouched.
    if (u == 0.0 && w == 0.0) return surface.at(i, j);
    return (1.0 - u) * (1.0 - w) * surface.at(i, j) + u * (1.0 - w) * surface.at(i + 1, j) +
           (1.0 - u) * w * surface.at(i, j + 1) + u * w * surface.at(i + 1, j + 1);
}

void write_surface_csv(std::ostream& out, const ValueSurface& surface) {
    const Grid2D& g = surface.grid;
    const std::vector<double> xs = g.x_nodes();
    const std::vector<double> ys = g.y_nodes();
    out << "tau,x,y,value\n";
    const auto old_precision = out.precision(12);
    for (int i = 0; i < g.n_x; ++i) {
        for (int j = 0; j < g.n_y; ++j) out << surface.tau << ',' << xs[i] << ',' << ys[j] << ',' << surface.at(i, j) << '\n';
    }
    out.precision(old_precision);
}

}  // namespace infopt
