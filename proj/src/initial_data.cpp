#include "anyon/initial_data.hpp"

#include <cmath>
#include <numbers>

#include "anyon/errors.hpp"
#include "anyon/stepper.hpp"

namespace anyon {
namespace {

double bump_value(const GaussianBump& b, const Vec2<double>& v, double x) {
    const double s = (v - Vec2<double>(b.u1, b.u2)).squaredNorm() / (2 * b.sigma * b.sigma);
    return b.amplitude * std::exp(-(b.power == 1 ? s : std::pow(s, b.power))) *
           (1 + b.eps * std::cos(2 * std::numbers::pi * x));
}

} // namespace

Vector<double> bose_einstein_slice(const VelocityGrid<double>& vg, double temperature, double mu) {
    if (!(mu < 0)) throw ConfigError("Bose-Einstein data needs mu < 0 (got " + std::to_string(mu) + ")");
    if (!(temperature > 0)) throw ConfigError("Bose-Einstein data needs T > 0");
    Vector<double> f(vg.size());
    for (int j = 0; j < vg.size(); ++j) f(j) = 1.0 / std::expm1((vg.node(j).squaredNorm() - mu) / temperature);
    return f;
}

State<double> make_initial_state(const RunConfig& cfg, std::shared_ptr<const Discretization<double>> grids) {
    State<double> s(std::move(grids), AlphaParam<double>(cfg.alpha));
    const auto& vg = s.velocity();
    const InitialCondition& ic = cfg.ic;
    for (int i = 0; i < s.cells(); ++i) {
        const double x = s.space().center(i);
        for (int j = 0; j < s.nodes(); ++j) {
            const Vec2<double> v = vg.node(j);
            double f = 0;
            switch (ic.kind) {
            case InitialKind::GaussianBump: f = bump_value(ic.bump, v, x); break;
            case InitialKind::TwoBeam: f = bump_value(ic.bump, v, x) + bump_value(ic.second, v, x); break;
            case InitialKind::BoseEinstein:
                if (!(ic.bose.mu < 0)) throw ConfigError("Bose-Einstein data needs mu < 0");
                f = 1.0 / std::expm1((v.squaredNorm() - ic.bose.mu) / ic.bose.temperature);
                break;
            }
            if (ic.delta > 0) {
                GaussianBump shape = ic.bump;
                shape.amplitude = ic.delta;
                shape.eps = 0;
                f += bump_value(shape, v, x);
            }
            s.f(i, j) = f;
        }
    }
    return s;
}

InitialBounds validate_initial(const State<double>& f0) {
    for (Eigen::Index i = 0; i < f0.f.rows(); ++i)
        for (Eigen::Index j = 0; j < f0.f.cols(); ++j) {
            const double v = f0.f(i, j);
            if (!std::isfinite(v) || !(v > 0))
                throw ConfigError("invalid initial data: value " + std::to_string(v) + " at cell " +
                                  std::to_string(i) + ", node " + std::to_string(j) + " is not positive");
            if (!(v < f0.alpha.ceiling()))
                throw DomainError("initial data breaches the occupancy ceiling 1/alpha at cell " +
                                  std::to_string(i) + ", node " + std::to_string(j));
        }
    InitialBounds b;
    b.L = BlowupMonitor<double>::least_power_exponent(f0.f.maxCoeff());
    b.c0 = f0.velocity().weight() * f0.f.colwise().maxCoeff().sum();
    return b;
}

} // namespace anyon
