#pragma once

#include <cstddef>
#include <span>

namespace infopt {

// Thomas algorithm for a tridiagonal system. lower[0] and upper[n-1] are
// ignored. `scratch` needs n entries; rhs and solution may alias.
// No pivoting: callers guarantee diagonal dominance.
inline void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                              std::span<const double> upper, std::span<const double> rhs,
                              std::span<double> solution, std::span<double> scratch) noexcept {
    const std::size_t n = diag.size();
    double pivot = diag[0];
    scratch[0] = upper[0] / pivot;
    solution[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i] * scratch[i - 1];
        scratch[i] = i + 1 < n ? upper[i] / pivot : 0.0;
        solution[i] = (rhs[i] - lower[i] * solution[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i > 0; --i) {
        solution[i - 1] -= scratch[i - 1] * solution[i];
    }
}

}  // namespace infopt
