#include "anyon/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "anyon/errors.hpp"
#include "anyon/io.hpp"

namespace anyon {

const char* to_string(Termination t) {
    switch (t) {
    case Termination::Completed: return "completed";
    case Termination::BlowupThreshold: return "blowup_threshold";
    case Termination::DtUnderflow: return "dt_underflow";
    }
    return "unknown";
}

int exit_code(Termination t) {
    switch (t) {
    case Termination::Completed: return 0;
    case Termination::BlowupThreshold: return 2;
    case Termination::DtUnderflow: return 3;
    }
    return 1;
}

namespace {

std::shared_ptr<const Discretization<double>> grids_for(const RunConfig& cfg) {
    return make_discretization(cfg.n_x, cfg.vmax, cfg.n_per_axis, cfg.n_theta);
}

RunConfig validated(const RunConfig& cfg) {
    cfg.validate();
    return cfg;
}

} // namespace

Simulation::Simulation(const RunConfig& cfg, int threads)
    : Simulation(cfg, make_initial_state(validated(cfg), grids_for(cfg)), threads) {}

Simulation::Simulation(const RunConfig& cfg, State<double> initial, int threads)
    : cfg_(validated(cfg)), integrator_(initial.grids, cfg.kernel(), threads), state_(std::move(initial)),
      sup_density_(state_), report_(state_) {
    report_.bounds = validate_initial(state_);
    report_.monitor = BlowupMonitor<double>::from_initial(state_);
    report_.lambdas = cfg_.lambdas;
    record(0.0);
}

void Simulation::record(double dt) {
    report_.records.push_back(
        record_diagnostics(integrator_.collision_operator(), state_, dt, cfg_.lambdas, sup_density_));
}

bool Simulation::advance(double dt_cap) {
    if (finished_) return false;
    const auto start = std::chrono::steady_clock::now();
    const double remaining = cfg_.t_end - state_.t;
    const double cap = std::min(dt_cap, remaining);
    StepResult<double> result = integrator_.step(state_, cfg_.step, cap);
    report_.rejections += result.rejections;
    if (result.status == StepStatus::DtUnderflow) {
        finished_ = true;
        report_.reason = Termination::DtUnderflow;
    } else {
        state_ = std::move(result.state);
        if (result.dt_used == remaining) state_.t = cfg_.t_end;
        ++report_.steps;
        sup_density_.update(state_);
        if (report_.steps % cfg_.cadence == 0) record(result.dt_used);

        if (check_blowup(report_.monitor, state_) == BlowupStatus::ThresholdCrossed) {
            report_.crossing_times.push_back(state_.t);
            if (cfg_.blowup == BlowupMode::Terminate) {
                finished_ = true;
                report_.reason = Termination::BlowupThreshold;
            } else {
                while (state_.f.maxCoeff() > report_.monitor.threshold()) report_.monitor.raise();
            }
        }
        if (!finished_ && state_.t >= cfg_.t_end) {
            finished_ = true;
            report_.reason = Termination::Completed;
        }
    }
    report_.final_state = state_;
    report_.wall_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return !finished_;
}

RunReport Simulation::take_report() { return std::move(report_); }

RunReport run(const RunConfig& cfg, const RunOptions& opts) {
    Simulation sim(cfg, opts.threads);
    while (sim.advance()) {
    }
    RunReport report = sim.take_report();
    if (opts.write_files) {
        ensure_directory(cfg.out_dir);
        write_diagnostics(cfg.out_dir + "/diagnostics.csv", report.records, cfg.lambdas);
        write_snapshot(cfg.out_dir + "/snapshot.txt", report.final_state);
        std::ofstream(cfg.out_dir + "/config.txt") << format_config(cfg);
    }
    return report;
}

AlphaSweepResult alpha_sweep(const RunConfig& cfg, const std::vector<double>& alphas, const RunOptions& opts) {
    cfg.validate();
    if (alphas.empty()) throw ConfigError("alpha sweep: empty alpha list");
    AlphaSweepResult out;
    out.alphas = alphas;

    // Common fixed step: the most restrictive initial proposal over the sweep.
    const auto grids = grids_for(cfg);
    double dt = cfg.step.dt_max;
    for (double a : alphas) {
        RunConfig c = cfg;
        c.alpha = a;
        Integrator<double> probe(grids, cfg.kernel(), opts.threads);
        dt = std::min(dt, probe.propose_dt(make_initial_state(c, grids), cfg.step));
    }
    out.dt = dt;

    std::vector<Simulation> sims;
    sims.reserve(alphas.size());
    for (double a : alphas) {
        RunConfig c = cfg;
        c.alpha = a;
        c.step.dt_min = dt;
        c.step.dt_max = dt;
        sims.emplace_back(c, make_initial_state(c, grids), opts.threads);
    }

    std::vector<std::size_t> positive;
    std::optional<std::size_t> limit;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        if (alphas[k] > 0)
            positive.push_back(k);
        else
            limit = k;
    }
    out.consecutive.assign(positive.empty() ? 0 : positive.size() - 1, 0.0);
    if (limit) out.to_limit.assign(positive.size(), 0.0);

    auto measure = [&] {
        for (std::size_t p = 0; p + 1 < positive.size(); ++p)
            out.consecutive[p] = std::max(out.consecutive[p],
                                          l1_distance(sims[positive[p]].state(), sims[positive[p + 1]].state()));
        if (limit)
            for (std::size_t p = 0; p < positive.size(); ++p)
                out.to_limit[p] =
                    std::max(out.to_limit[p], l1_distance(sims[positive[p]].state(), sims[*limit].state()));
    };

    measure();
    for (;;) {
        bool all_running = true;
        for (auto& s : sims) {
            s.advance();
            if (s.finished() && s.report().reason != Termination::Completed) all_running = false;
        }
        if (!all_running) {
            // compare only the span every run reached; a run that stopped early did not take this step
            out.truncated = true;
            break;
        }
        measure();
        out.common_time = sims.front().state().t;
        if (std::all_of(sims.begin(), sims.end(), [](const Simulation& s) { return s.finished(); })) break;
    }
    for (auto& s : sims) out.terminations.push_back(s.report().reason);
    for (std::size_t p = 0; p + 1 < out.consecutive.size(); ++p)
        out.factors.push_back(out.consecutive[p] / out.consecutive[p + 1]);

    if (opts.write_files) {
        ensure_directory(cfg.out_dir);
        for (auto& s : sims) {
            const std::string dir = cfg.out_dir + "/alpha_" + format_real(s.config().alpha);
            ensure_directory(dir);
            write_diagnostics(dir + "/diagnostics.csv", s.report().records, cfg.lambdas);
            write_snapshot(dir + "/snapshot.txt", s.state());
        }
        std::ofstream csv(cfg.out_dir + "/alpha_sweep.csv");
        csv << "kind,alpha_a,alpha_b,sup_l1_distance,contraction_factor\n";
        for (std::size_t p = 0; p < out.consecutive.size(); ++p)
            csv << "consecutive," << format_real(alphas[positive[p]]) << ',' << format_real(alphas[positive[p + 1]])
                << ',' << format_real(out.consecutive[p]) << ','
                << (p == 0 ? std::string("nan") : format_real(out.factors[p - 1])) << '\n';
        for (std::size_t p = 0; p < out.to_limit.size(); ++p)
            csv << "to_limit," << format_real(alphas[positive[p]]) << ",0," << format_real(out.to_limit[p])
                << ",nan\n";
    }
    return out;
}

UniformBoundResult uniform_bound_experiment(const RunConfig& cfg, const std::vector<double>& alphas,
                                            const RunOptions& opts) {
    cfg.validate();
    if (alphas.empty()) throw ConfigError("uniform-bound experiment: empty alpha list");
    UniformBoundResult out;
    out.alphas = alphas;
    for (double a : alphas) {
        RunConfig c = cfg;
        c.alpha = a;
        c.blowup = BlowupMode::Terminate;
        Simulation sim(c, opts.threads);
        out.L = sim.report().bounds.L;
        while (sim.advance()) {
        }
        if (sim.report().reason == Termination::BlowupThreshold)
            out.first_crossing.push_back(sim.state().t);
        else
            out.first_crossing.push_back(std::nullopt);
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    bool any = false;
    for (const auto& t : out.first_crossing) {
        const double v = t ? *t : cfg.t_end;
        if (t) any = true;
        if (!t) out.spread_is_lower_bound = true;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (any) out.spread = hi / lo;
    if (opts.write_files) {
        ensure_directory(cfg.out_dir);
        std::ofstream csv(cfg.out_dir + "/uniform_bound.csv");
        csv << "alpha,first_crossing_time\n";
        for (std::size_t k = 0; k < alphas.size(); ++k)
            csv << format_real(alphas[k]) << ','
                << (out.first_crossing[k] ? format_real(*out.first_crossing[k]) : std::string("none")) << '\n';
    }
    return out;
}

std::vector<RefinementRow> equilibrium_refinement_study(const RunConfig& cfg, const std::vector<int>& n_list,
                                                        const RunOptions& opts) {
    if (cfg.ic.kind != InitialKind::BoseEinstein)
        throw ConfigError("refinement study: needs ic.kind = bose_einstein");
    if (cfg.alpha != 0) throw ConfigError("refinement study: needs run.alpha = 0");
    const AngularGrid<double> ang(cfg.n_theta);
    std::vector<RefinementRow> rows;
    for (int n : n_list) {
        const auto vg = build_velocity_grid(cfg.vmax, n);
        const Vector<double> f = bose_einstein_slice(vg, cfg.ic.bose.temperature, cfg.ic.bose.mu);
        CollisionOperator<double> op(vg, ang, cfg.kernel(), opts.threads);
        const CollisionOutput<double> raw = op.evaluate(f, AlphaParam<double>(0.0));
        CollisionOutput<double> proj = raw;
        project_conservative(proj, vg);
        const CollisionOutput<double> weighted = project_conservative_state(raw, vg, f);
        RefinementRow row;
        row.n = n;
        row.residual = vg.weight() * proj.net.cwiseAbs().sum();
        row.weighted_residual = vg.weight() * weighted.net.cwiseAbs().sum();
        row.raw_residual = vg.weight() * raw.net.cwiseAbs().sum();
        row.projection_shift = vg.weight() * (raw.net - proj.net).cwiseAbs().sum();
        if (!rows.empty())
            row.order = std::log(rows.back().residual / row.residual) / std::log(double(n) / rows.back().n);
        rows.push_back(row);
    }
    if (opts.write_files) {
        ensure_directory(cfg.out_dir);
        std::ofstream csv(cfg.out_dir + "/refinement.csv");
        csv << "n_per_axis,residual,raw_residual,projection_shift,weighted_residual,observed_order\n";
        for (const auto& r : rows)
            csv << r.n << ',' << format_real(r.residual) << ',' << format_real(r.raw_residual) << ','
                << format_real(r.projection_shift) << ',' << format_real(r.weighted_residual) << ','
                << (r.order ? format_real(*r.order) : std::string("nan"))
                << '\n';
    }
    return rows;
}

} // namespace anyon
