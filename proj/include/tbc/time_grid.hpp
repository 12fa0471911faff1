#ifndef TBC_TIME_GRID_HPP
#define TBC_TIME_GRID_HPP

#include <stdexcept>

namespace tbc {

/// Uniform temporal grid: t_n = n * dt, n = 0..N, horizon T = N * dt.
struct TimeGrid {
    int N = 0;
    double dt = 0.0;

    TimeGrid() = default;
    TimeGrid(int n, double step) : N(n), dt(step) {
        if (n < 1 || !(step > 0.0)) throw std::invalid_argument("TimeGrid: N >= 1, dt > 0");
    }
    double T() const { return N * dt; }
    double t(int n) const { return n * dt; }
};

}  // namespace tbc

#endif
