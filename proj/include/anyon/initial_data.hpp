#pragma once

#include "anyon/config.hpp"
#include "anyon/state.hpp"

namespace anyon {

/// f0 on the grids of `grids` for the configured initial condition.
State<double> make_initial_state(const RunConfig& cfg, std::shared_ptr<const Discretization<double>> grids);

/// Bose-Einstein values 1 / (exp((|v|^2 - mu) / T) - 1) on the velocity nodes.
Vector<double> bose_einstein_slice(const VelocityGrid<double>& vg, double temperature, double mu);

struct InitialBounds {
    int L = 0;       ///< least nonnegative L with sup f0 <= 2^L
    double c0 = 0;   ///< velocity quadrature of sup_x f0
};

/// Checks positivity (every node value > 0), finiteness and, for anyons, the
/// occupancy ceiling. Throws ConfigError or DomainError.
InitialBounds validate_initial(const State<double>& f0);

} // namespace anyon
