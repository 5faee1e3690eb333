#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "anyon/stepper.hpp"
#include "anyon/transport.hpp"

using namespace anyon;
using Grids = std::shared_ptr<const Discretization<double>>;

namespace {

// Gaussian bump modulated in x; every value strictly positive.
State<double> bump_state(const Grids& g, double alpha, double amp = 0.8, double sigma = 0.6, double eps = 0.5) {
    State<double> s(g, AlphaParam<double>(alpha));
    const auto& vg = g->velocity;
    for (int i = 0; i < s.cells(); ++i) {
        const double x = g->space.center(i);
        for (int j = 0; j < vg.size(); ++j) {
            const auto v = vg.node(j);
            const double d = (v - Vec2<double>(0.2, -0.1)).squaredNorm();
            s.f(i, j) = amp * std::exp(-d / (2 * sigma * sigma)) * (1 + eps * std::cos(2 * std::numbers::pi * x)) +
                        1e-3;
        }
    }
    return s;
}

KernelSpec<double> kernel(double B0) {
    KernelSpec<double> k;
    k.B0 = B0;
    return k;
}

std::array<double, 4> totals(const State<double>& s) {
    std::array<double, 4> m{0, 0, 0, 0};
    const auto& vg = s.velocity();
    const double w = vg.weight() * s.space().spacing();
    for (int i = 0; i < s.cells(); ++i)
        for (int j = 0; j < s.nodes(); ++j) {
            const auto v = vg.node(j);
            m[0] += w * s.f(i, j);
            m[1] += w * s.f(i, j) * v.x();
            m[2] += w * s.f(i, j) * v.y();
            m[3] += w * s.f(i, j) * v.squaredNorm();
        }
    return m;
}

StepControl<double> fixed_dt(double dt) {
    StepControl<double> c;
    c.dt_min = c.dt_max = dt;
    return c;
}

} // namespace

TEST_CASE("advect: examples") {
    const auto g = make_discretization(8, 2.0, 8, 8);
    const auto s = bump_state(g, 0.0);
    CHECK(advect(s, 0.0).f == s.f);

    // dt = 0.5: v1 * dt * n_x = v1 * 4 is an integer number of cells for v1 = +-0.25 ... +-1.75
    const auto shifted = advect(s, 0.5);
    const auto& vg = g->velocity;
    for (int j = 0; j < vg.size(); ++j) {
        const int cells = static_cast<int>(std::lround(vg.node(j).x() * 0.5 * 8));
        for (int i = 0; i < 8; ++i) CHECK(shifted.f(i, j) == s.f(g->space.wrap(i - cells), j));
    }

    const auto generic = advect(s, 0.0137);
    for (int j = 0; j < vg.size(); ++j) {
        const double before = s.f.col(j).sum(), after = generic.f.col(j).sum();
        CHECK(std::abs(after - before) <= 1e-13 * before);
    }
    CHECK(generic.f.minCoeff() >= 0.0);
}

TEST_CASE("collide: trivial cases") {
    const auto g = make_discretization(4, 2.0, 8, 8);
    StepControl<double> ctrl;
    {
        Integrator<double> integ(g, kernel(0.0));
        const auto s = bump_state(g, 0.0);
        const auto out = integ.collide(s, 0.3, ctrl);
        REQUIRE(std::holds_alternative<State<double>>(out));
        CHECK(std::get<State<double>>(out).f == s.f);
    }
    {
        Integrator<double> integ(g, kernel(1.0));
        State<double> s(g, AlphaParam<double>(0.0));
        s.f.setConstant(0.4);
        const auto out = integ.collide(s, 0.05, ctrl);
        REQUIRE(std::holds_alternative<State<double>>(out));
        CHECK((std::get<State<double>>(out).f - s.f).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("collide: Heun step-halving order") {
    const auto g = make_discretization(2, 2.0, 8, 8);
    Integrator<double> integ(g, kernel(1.0));
    const StepControl<double> ctrl;
    auto s = bump_state(g, 0.0, 1.0, 0.6, 0.3);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(0.9, 1.1);
    for (int i = 0; i < s.cells(); ++i)
        for (int j = 0; j < s.nodes(); ++j) s.f(i, j) *= U(rng);

    auto heun = [&](const State<double>& x, double dt) { return std::get<State<double>>(integ.collide(x, dt, ctrl)); };
    auto defect = [&](double dt) {
        const auto one = heun(s, dt);
        const auto two = heun(heun(s, dt / 2), dt / 2);
        return (one.f - two.f).cwiseAbs().sum();
    };
    const double d1 = defect(0.1), d2 = defect(0.05);
    const double order = std::log2(d1 / d2) - 1;
    MESSAGE("Heun step-halving order " << order);
    CHECK(order >= 1.8);
}

TEST_CASE("step: free transport is exact when shifts are commensurate") {
    const auto g = make_discretization(8, 2.0, 8, 8);
    Integrator<double> integ(g, kernel(0.0));
    const auto s0 = bump_state(g, 0.0);
    auto s = s0;
    const auto ctrl = fixed_dt(1.0);
    for (int n = 0; n < 100; ++n) {
        const auto r = integ.step(s, ctrl);
        REQUIRE(r.status == StepStatus::Accepted);
        CHECK(r.dt_used == 1.0);
        s = r.state;
    }
    // total shift v1 * 100 * 8 cells is a whole number of periods for every node
    CHECK((s.f - s0.f).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(s.t == doctest::Approx(100.0));
}

TEST_CASE("step: self-convergence in dt") {
    // n_x = 320 makes every half-step shift an integer number of cells for
    // dt in {0.1, 0.05, 0.025}, so the global error is splitting plus Heun.
    const auto g = make_discretization(320, 2.0, 8, 8);
    const auto s0 = bump_state(g, 0.0, 0.5, 0.6, 0.5);
    auto solve = [&](double dt) {
        Integrator<double> integ(g, kernel(0.5));
        auto s = s0;
        const int steps = static_cast<int>(std::lround(0.4 / dt));
        for (int n = 0; n < steps; ++n) {
            const auto r = integ.step(s, fixed_dt(dt));
            REQUIRE(r.status == StepStatus::Accepted);
            s = r.state;
        }
        return s;
    };
    const auto a = solve(0.1), b = solve(0.05), c = solve(0.025);
    const double e1 = l1_distance(a, b), e2 = l1_distance(b, c);
    const double order = std::log2(e1 / e2);
    MESSAGE("Strang self-convergence order " << order);
    CHECK(order >= 1.5);
}

TEST_CASE("step: conservation and positivity across accepted steps") {
    const auto g = make_discretization(6, 3.0, 12, 8);
    for (double alpha : {0.0, 0.125}) {
        Integrator<double> integ(g, kernel(1.0));
        StepControl<double> ctrl;
        auto s = bump_state(g, alpha, 1.5, 0.7, 0.5);
        const auto m0 = totals(s);
        for (int n = 0; n < 10; ++n) {
            const auto r = integ.step(s, ctrl);
            REQUIRE(r.status == StepStatus::Accepted);
            s = r.state;
            CHECK(s.f.minCoeff() >= 0.0);
            CHECK(s.f.maxCoeff() <= ctrl.cap(s.alpha));
            const auto m = totals(s);
            CHECK(std::abs(m[0] - m0[0]) <= 1e-12 * m0[0]);
            CHECK(std::abs(m[1] - m0[1]) <= 1e-12 * m0[0] * 3.0);
            CHECK(std::abs(m[2] - m0[2]) <= 1e-12 * m0[0] * 3.0);
            CHECK(std::abs(m[3] - m0[3]) <= 1e-12 * m0[3]);
        }
    }
}

TEST_CASE("propose_dt: examples") {
    const auto g = make_discretization(2, 2.0, 8, 8);
    StepControl<double> ctrl;
    {
        Integrator<double> integ(g, kernel(1.0));
        State<double> zero(g, AlphaParam<double>(0.0));
        CHECK(integ.propose_dt(zero, ctrl) == ctrl.dt_max);
    }
    StepControl<double> wide;
    wide.dt_min = 1e-300;
    wide.dt_max = 1e300;
    const auto s = bump_state(g, 0.0);
    Integrator<double> one(g, kernel(1.0)), two(g, kernel(2.0));
    CHECK(two.propose_dt(s, wide) == one.propose_dt(s, wide) / 2);

    // near-ceiling anyon state
    const double alpha = 0.125;
    auto a = bump_state(g, alpha, 2.0);
    const int j = g->velocity.index(4, 4);
    a.f(0, j) = 0.999 / alpha;
    Integrator<double> integ(g, kernel(1.0));
    CellRates<double> rates;
    integ.projected_rates(a, &rates);
    const double nu_based = wide.cfl_collision / rates.frequency.maxCoeff();
    const double dt = integ.propose_dt(a, wide);
    CHECK(dt < nu_based);
    CHECK(dt > 0.0);
}

TEST_CASE("step: dt underflow when no step within the floor is admissible") {
    const auto g = make_discretization(2, 2.0, 8, 8);
    Integrator<double> integ(g, kernel(5.0));
    const auto s = bump_state(g, 0.0, 1.5);
    // a forced dt far beyond the loss time scale drives the tails negative
    const auto r = integ.step(s, fixed_dt(20.0));
    CHECK(r.status == StepStatus::DtUnderflow);
    CHECK(r.rejections == 1);
    CHECK(r.state.f == s.f);
}

TEST_CASE("check_blowup: ladder") {
    const auto g = make_discretization(1, 2.0, 4, 4);
    State<double> s(g, AlphaParam<double>(0.0));
    s.f.setConstant(0.5);
    s.f(0, 0) = 4.0;
    auto mon = BlowupMonitor<double>::from_initial(s);
    CHECK(mon.L == 2);
    CHECK(mon.threshold() == 8.0);
    CHECK(check_blowup(mon, s) == BlowupStatus::Ok);
    s.f(0, 0) = 8.0;
    CHECK(check_blowup(mon, s) == BlowupStatus::Ok);
    s.f(0, 0) = 8.0 + 1e-9;
    CHECK(check_blowup(mon, s) == BlowupStatus::ThresholdCrossed);
    mon.raise();
    CHECK(mon.threshold_exponent == 4);
    CHECK(check_blowup(mon, s) == BlowupStatus::Ok);
    CHECK(mon.history.size() == 5);

    s.f.setConstant(0.3);
    CHECK(BlowupMonitor<double>::from_initial(s).L == 0);
    s.f(0, 1) = 5.0;
    CHECK(BlowupMonitor<double>::from_initial(s).L == 3);
}
