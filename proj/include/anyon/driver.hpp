#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anyon/config.hpp"
#include "anyon/diagnostics.hpp"
#include "anyon/initial_data.hpp"
#include "anyon/stepper.hpp"

namespace anyon {

enum class Termination { Completed, BlowupThreshold, DtUnderflow };

const char* to_string(Termination t);
/// 0 completed, 2 blowup_threshold, 3 dt_underflow.
int exit_code(Termination t);

struct RunReport {
    explicit RunReport(State<double> initial) : final_state(std::move(initial)) {}

    std::vector<DiagnosticsRecord<double>> records;
    Termination reason = Termination::Completed;
    State<double> final_state;
    int steps = 0;
    int rejections = 0;
    double wall_seconds = 0;
    InitialBounds bounds;
    BlowupMonitor<double> monitor;
    std::vector<double> crossing_times; ///< times at which sup f crossed a ladder rung
    std::vector<double> lambdas;
};

/// One simulation advanced step by step; run() is the plain loop over it.
class Simulation {
public:
    Simulation(const RunConfig& cfg, int threads = 1);
    Simulation(const RunConfig& cfg, State<double> initial, int threads = 1);

    /// One accepted step (or termination). Returns false once finished.
    bool advance(double dt_cap = std::numeric_limits<double>::infinity());
    bool finished() const { return finished_; }

    const State<double>& state() const { return state_; }
    const RunConfig& config() const { return cfg_; }
    Integrator<double>& integrator() { return integrator_; }
    const RunReport& report() const { return report_; }
    RunReport take_report();

private:
    void record(double dt);

    RunConfig cfg_;
    Integrator<double> integrator_;
    State<double> state_;
    SupDensityAccumulator<double> sup_density_;
    RunReport report_;
    bool finished_ = false;
};

struct RunOptions {
    int threads = 1;
    bool write_files = true;
};

/// Runs to t_end or termination; with write_files, writes diagnostics.csv,
/// snapshot.txt and config.txt into cfg.out_dir.
RunReport run(const RunConfig& cfg, const RunOptions& opts = {});

struct AlphaSweepResult {
    std::vector<double> alphas;
    double dt = 0;             ///< common fixed step of all member runs
    double common_time = 0;    ///< time span shared by all runs
    bool truncated = false;    ///< some run ended before t_end
    std::vector<Termination> terminations;
    std::vector<double> consecutive;      ///< sup_t L1(f_{a_k}, f_{a_k+1})
    std::vector<double> factors;          ///< consecutive[k] / consecutive[k+1]
    std::vector<double> to_limit;         ///< sup_t L1(f_a, f_0) per positive alpha, if 0 is in the list
};

/// Runs every alpha from the same f0 in lockstep with a common fixed dt and
/// tracks sup-in-time L1 distances. Writes alpha_sweep.csv with write_files.
AlphaSweepResult alpha_sweep(const RunConfig& cfg, const std::vector<double>& alphas, const RunOptions& opts = {});

struct UniformBoundResult {
    std::vector<double> alphas;
    int L = 0;
    std::vector<std::optional<double>> first_crossing; ///< first t with sup f > 2^(L+1)
    std::optional<double> spread; ///< max/min crossing time; absent when nothing crossed
    bool spread_is_lower_bound = false; ///< some alpha did not cross; t_end stands in for it
};

UniformBoundResult uniform_bound_experiment(const RunConfig& cfg, const std::vector<double>& alphas,
                                            const RunOptions& opts = {});

struct RefinementRow {
    int n = 0;
    double residual = 0;          ///< L1 norm of the projected rate (unit weights)
    double weighted_residual = 0; ///< same with the f-weighted projection used by the stepper
    double raw_residual = 0;      ///< L1 norm before projection
    double projection_shift = 0;  ///< L1 norm of net - net'
    std::optional<double> order;  ///< observed order against the previous row
};

/// Projected collision rate of the discrete Bose-Einstein slice (alpha = 0)
/// on each velocity grid size in `n_list`.
std::vector<RefinementRow> equilibrium_refinement_study(const RunConfig& cfg, const std::vector<int>& n_list,
                                                        const RunOptions& opts = {});

} // namespace anyon
