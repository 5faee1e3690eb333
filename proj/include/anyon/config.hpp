#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "anyon/kernel.hpp"
#include "anyon/stepper.hpp"

namespace anyon {

enum class BlowupMode { Ladder, Terminate };
enum class InitialKind { GaussianBump, BoseEinstein, TwoBeam };

/// A exp(-s^p) (1 + eps cos(2 pi x)) with s = |v - u|^2 / (2 sigma^2); p = 1
/// is the Gaussian, larger p flattens the top.
struct GaussianBump {
    double amplitude = 1;
    double u1 = 0, u2 = 0;
    double sigma = 1;
    double eps = 0;
    double power = 1;
};

/// 1 / (exp((|v|^2 - mu) / T) - 1), requires mu < 0.
struct BoseEinsteinData {
    double temperature = 0.5;
    double mu = -0.5;
};

struct InitialCondition {
    InitialKind kind = InitialKind::GaussianBump;
    GaussianBump bump;
    GaussianBump second; ///< second beam of two_beam
    BoseEinsteinData bose;
    double delta = 0; ///< adds delta * exp(-|v - u|^2 / (2 sigma^2)) of the first bump
};

struct RunConfig {
    int n_x = 16;
    int n_per_axis = 32;
    double vmax = 4;
    int n_theta = 16;

    double B0 = 1;
    double gamma = 0.1;
    double gamma_prime = 0.1;
    std::string profile = "constant"; ///< constant | sin2
    double profile_scale = 1;

    double alpha = 0;
    StepControl<double> step{0.2, 1e-8, 0.05, 1e-6};
    double t_end = 1;
    InitialCondition ic;
    int cadence = 1;
    std::vector<double> lambdas{1.0, 2.0, 3.0};
    std::string out_dir = "out";
    BlowupMode blowup = BlowupMode::Ladder;
    std::uint64_t seed = 1;

    std::vector<double> sweep_alphas{0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.0};
    std::vector<int> refine_n{16, 32, 64};

    /// Throws ConfigError naming the offending key.
    void validate() const;
    KernelSpec<double> kernel() const;
};

/// key = value lines with dotted sections; '#' starts a comment. Unknown keys
/// and missing required keys (run.t_end, ic.kind) are rejected.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_string(const std::string& text);

/// Round-trippable text form of a configuration.
std::string format_config(const RunConfig& cfg);

} // namespace anyon
