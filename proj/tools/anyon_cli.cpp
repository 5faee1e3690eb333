// Command-line front end: run, sweep-alpha, uniform-bound, refine-equilibrium,
// validate-kernel, oracle-check.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <random>

#include "anyon/driver.hpp"
#include "anyon/errors.hpp"
#include "anyon/io.hpp"
#include "anyon/oracle.hpp"

namespace {

constexpr int kExitConfig = 64;

struct Common {
    std::string config_path;
    std::string out_dir;
    int threads = 1;
};

anyon::RunConfig load(const Common& c) {
    anyon::RunConfig cfg = anyon::parse_config_file(c.config_path);
    if (!c.out_dir.empty()) cfg.out_dir = c.out_dir;
    return cfg;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config_path, "configuration file (key = value)")->required();
    sub->add_option("--out", c.out_dir, "output directory (overrides out.dir)");
    sub->add_option("--threads", c.threads, "worker threads; affects speed only")->check(CLI::PositiveNumber);
}

int cmd_run(const Common& c) {
    const auto cfg = load(c);
    const anyon::RunReport r = anyon::run(cfg, {c.threads, true});
    std::printf("termination %s\nsteps %d\nrejections %d\nt_final %.17g\nsup_norm %.17g\nwall_seconds %.3f\n",
                anyon::to_string(r.reason), r.steps, r.rejections, r.final_state.t, r.final_state.f.maxCoeff(),
                r.wall_seconds);
    return anyon::exit_code(r.reason);
}

int cmd_sweep(const Common& c) {
    const auto cfg = load(c);
    const auto r = anyon::alpha_sweep(cfg, cfg.sweep_alphas, {c.threads, true});
    std::printf("dt %.17g\ncommon_time %.17g\ntruncated %s\n", r.dt, r.common_time, r.truncated ? "yes" : "no");
    for (std::size_t k = 0; k < r.consecutive.size(); ++k)
        std::printf("distance %zu %.17g\n", k, r.consecutive[k]);
    for (std::size_t k = 0; k < r.factors.size(); ++k) std::printf("factor %zu %.6f\n", k, r.factors[k]);
    for (std::size_t k = 0; k < r.to_limit.size(); ++k) std::printf("to_limit %zu %.17g\n", k, r.to_limit[k]);
    return 0;
}

int cmd_uniform(const Common& c) {
    const auto cfg = load(c);
    const auto r = anyon::uniform_bound_experiment(cfg, cfg.sweep_alphas, {c.threads, true});
    std::printf("L %d threshold %.17g\n", r.L, std::ldexp(1.0, r.L + 1));
    for (std::size_t k = 0; k < r.alphas.size(); ++k) {
        if (r.first_crossing[k])
            std::printf("alpha %.17g crossing %.17g\n", r.alphas[k], *r.first_crossing[k]);
        else
            std::printf("alpha %.17g crossing none\n", r.alphas[k]);
    }
    if (r.spread)
        std::printf("spread %.6f%s\n", *r.spread, r.spread_is_lower_bound ? " (lower bound)" : "");
    else
        std::printf("spread none\n");
    return 0;
}

int cmd_refine(const Common& c) {
    const auto cfg = load(c);
    const auto rows = anyon::equilibrium_refinement_study(cfg, cfg.refine_n, {c.threads, true});
    for (const auto& r : rows) {
        std::printf("n %d residual %.6e raw %.6e", r.n, r.residual, r.raw_residual);
        if (r.order) std::printf(" order %.4f", *r.order);
        std::printf("\n");
    }
    return 0;
}

int cmd_validate_kernel(const Common& c) {
    const auto cfg = load(c);
    const anyon::AngularGrid<double> ang(cfg.n_theta);
    const double bound = anyon::validate_kernel(cfg.kernel(), ang);
    std::printf("angular_integral %.17g\n", bound);
    return 0;
}

int cmd_oracle(const Common& c, int slices) {
    auto cfg = load(c);
    const auto vg = anyon::build_velocity_grid(cfg.vmax, 8);
    const anyon::AngularGrid<double> ang(8);
    const anyon::AlphaParam<double> alpha(cfg.alpha);
    anyon::CollisionOperator<double> op(vg, ang, cfg.kernel(), c.threads);
    std::mt19937_64 rng(cfg.seed);
    const double top = alpha.boson() ? 2.0 : 0.9 / cfg.alpha;
    std::uniform_real_distribution<double> U(0.0, top);
    double worst = 0;
    for (int s = 0; s < slices; ++s) {
        anyon::Vector<double> f(vg.size());
        for (int j = 0; j < vg.size(); ++j) f(j) = U(rng);
        const auto fast = op.evaluate(f, alpha);
        const auto ref = anyon::oracle_Q(f, vg, ang, cfg.kernel(), alpha);
        const double scale = std::max(ref.gain.cwiseAbs().maxCoeff(), ref.loss.cwiseAbs().maxCoeff());
        const double diff = std::max((fast.gain - ref.gain).cwiseAbs().maxCoeff(),
                                     (fast.loss - ref.loss).cwiseAbs().maxCoeff());
        worst = std::max(worst, scale > 0 ? diff / scale : diff);
    }
    std::printf("slices %d max_relative_difference %.3e %s\n", slices, worst, worst <= 1e-12 ? "PASS" : "FAIL");
    return worst <= 1e-12 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-velocity solver for the anyon / boson Boltzmann equation in a periodic slab"};
    app.require_subcommand(1);
    Common common;
    int slices = 20;

    auto* run = app.add_subcommand("run", "advance one configuration to run.t_end");
    auto* sweep = app.add_subcommand("sweep-alpha", "L1 distances between runs over sweep.alphas");
    auto* uniform = app.add_subcommand("uniform-bound", "first time sup f exceeds 2^(L+1) per alpha");
    auto* refine = app.add_subcommand("refine-equilibrium", "Bose-Einstein residual over refine.n_list");
    auto* kernel = app.add_subcommand("validate-kernel", "angular integral of the kernel");
    auto* oracle = app.add_subcommand("oracle-check", "compare the collision operator with the naive oracle");
    for (auto* sub : {run, sweep, uniform, refine, kernel, oracle}) add_common(sub, common);
    oracle->add_option("--slices", slices, "number of random slices")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) return cmd_run(common);
        if (*sweep) return cmd_sweep(common);
        if (*uniform) return cmd_uniform(common);
        if (*refine) return cmd_refine(common);
        if (*kernel) return cmd_validate_kernel(common);
        if (*oracle) return cmd_oracle(common, slices);
    } catch (const anyon::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const anyon::ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
