#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "anyon/diagnostics.hpp"
#include "anyon/initial_data.hpp"
#include "anyon/oracle.hpp"
#include "anyon/stepper.hpp"

using namespace anyon;

namespace {

// Plain long double sums as the independent reference.
struct Direct {
    long double mass = 0, p1 = 0, p2 = 0, energy = 0, entropy = 0;
};

Direct direct(const State<double>& s) {
    Direct d;
    const auto& vg = s.velocity();
    const long double w = (long double)vg.weight() * s.space().spacing();
    for (int i = 0; i < s.cells(); ++i)
        for (int j = 0; j < s.nodes(); ++j) {
            const long double f = s.f(i, j);
            const long double v1 = vg.node(j).x(), v2 = vg.node(j).y();
            d.mass += w * f;
            d.p1 += w * f * v1;
            d.p2 += w * f * v2;
            d.energy += w * f * (v1 * v1 + v2 * v2);
            if (f > 0) d.entropy += w * ((1 + f) * std::log(1 + f) - f * std::log(f));
        }
    return d;
}

State<double> gaussian(const std::shared_ptr<const Discretization<double>>& g, double u1, double sigma) {
    State<double> s(g, AlphaParam<double>(0.0));
    for (int i = 0; i < s.cells(); ++i)
        for (int j = 0; j < s.nodes(); ++j) {
            const auto v = g->velocity.node(j);
            s.f(i, j) = 0.8 * std::exp(-((v.x() - u1) * (v.x() - u1) + v.y() * v.y()) / (2 * sigma * sigma)) *
                        (1 + 0.3 * std::sin(2 * std::numbers::pi * g->space.center(i)));
        }
    return s;
}

} // namespace

TEST_CASE("moments: examples") {
    const auto g = make_discretization(3, 1.0, 4, 4);
    State<double> s(g, AlphaParam<double>(0.0));
    auto m = moments(s);
    CHECK(m.mass == 0.0);
    CHECK(m.energy == 0.0);
    CHECK(m.momentum.norm() == 0.0);

    s.f.setConstant(0.35);
    m = moments(s);
    CHECK(m.mass == doctest::Approx(4 * 0.35).epsilon(1e-15));
    CHECK(std::abs(m.momentum.x()) <= 1e-16);
    CHECK(std::abs(m.momentum.y()) <= 1e-16);

    const auto g2 = make_discretization(5, 4.0, 32, 4);
    State<double> be(g2, AlphaParam<double>(0.0));
    const auto slice = bose_einstein_slice(g2->velocity, 0.5, -0.5);
    for (int i = 0; i < be.cells(); ++i) be.f.row(i) = slice.transpose();
    const auto d = direct(be);
    CHECK(std::abs(moments(be).energy - (double)d.energy) <= 1e-14 * (double)d.energy);
    CHECK(std::abs(moments(be).mass - (double)d.mass) <= 1e-14 * (double)d.mass);
}

TEST_CASE("bony_functional: examples") {
    const auto g = make_discretization(2, 2.0, 8, 8);
    State<double> s(g, AlphaParam<double>(0.0));
    CHECK(bony_functional(s, KernelSpec<double>{}) == 0.0);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(0, 2);
    for (int i = 0; i < s.cells(); ++i)
        for (int j = 0; j < s.nodes(); ++j) s.f(i, j) = U(rng);
    KernelSpec<double> off;
    off.B0 = 0;
    CHECK(bony_functional(s, off) == 0.0);

    for (double alpha : {0.0, 0.125}) {
        State<double> a = s;
        a.alpha = AlphaParam<double>(alpha);
        double ref = 0;
        for (int i = 0; i < a.cells(); ++i)
            ref += g->space.spacing() * oracle_bony(a.f.row(i).transpose().eval(), g->velocity, g->angle,
                                                    KernelSpec<double>{}, a.alpha);
        const double got = bony_functional(a, KernelSpec<double>{});
        CHECK(got > 0.0);
        CHECK(std::abs(got - ref) <= 1e-12 * ref);
    }
}

TEST_CASE("tail_mass: examples") {
    const auto g = make_discretization(4, 3.0, 16, 4);
    const auto s = gaussian(g, 0.0, 0.8);
    const double vmax = 3.0;
    CHECK(tail_mass(s, vmax * std::sqrt(2.0)).mass == 0.0);
    CHECK(tail_mass(s, vmax * std::sqrt(2.0)).weighted == 0.0);
    CHECK(std::abs(tail_mass(s, 0.0).mass - moments(s).mass) <= 1e-14 * moments(s).mass);

    long double ref = 0, ref_w = 0;
    const auto& vg = g->velocity;
    for (int i = 0; i < s.cells(); ++i)
        for (int j = 0; j < s.nodes(); ++j) {
            const long double speed = std::hypot((long double)vg.node(j).x(), (long double)vg.node(j).y());
            if (speed <= vmax / 2) continue;
            ref += (long double)vg.weight() * g->space.spacing() * s.f(i, j);
            ref_w += (long double)vg.weight() * g->space.spacing() * s.f(i, j) * speed;
        }
    const auto t = tail_mass(s, vmax / 2);
    CHECK(std::abs(t.mass - (double)ref) <= 1e-14 * (double)ref);
    CHECK(std::abs(t.weighted - (double)ref_w) <= 1e-14 * (double)ref_w);

    double prev = tail_mass(s, 0.0).mass;
    for (double l = 0.25; l < 5; l += 0.25) {
        const double cur = tail_mass(s, l).mass;
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("sup-density accumulator: free streaming over one period") {
    // vmax = 2, n = 8, n_x = 8, dt = 1: each half step shifts row j by 4 v1 cells.
    const auto g = make_discretization(8, 2.0, 8, 8);
    const auto s0 = gaussian(g, 0.3, 0.7);
    KernelSpec<double> off;
    off.B0 = 0;
    Integrator<double> integ(g, off);
    StepControl<double> ctrl;
    ctrl.dt_min = ctrl.dt_max = 1.0;
    SupDensityAccumulator<double> acc(s0);
    auto s = s0;
    for (int n = 0; n < 2; ++n) {
        s = integ.step(s, ctrl).state;
        update_sup_density(acc, s);
    }
    const Vector<double> expected = s0.f.colwise().maxCoeff().transpose();
    CHECK((acc.pointwise() - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK(read_sup_density(acc, g->velocity) == doctest::Approx(g->velocity.weight() * expected.sum()).epsilon(1e-14));
}

TEST_CASE("sup-density accumulator: monotone and equal to store-and-scan") {
    const auto g = make_discretization(6, 3.0, 12, 8);
    auto s = gaussian(g, 0.2, 0.7);
    Integrator<double> integ(g, KernelSpec<double>{});
    StepControl<double> ctrl;
    SupDensityAccumulator<double> acc(s), window(s, 1, 3);
    std::vector<Field<double>> history{s.f};
    double last = acc.read(g->velocity);
    for (int n = 0; n < 10; ++n) {
        s = integ.step(s, ctrl).state;
        acc.update(s);
        window.update(s);
        history.push_back(s.f);
        const double now = acc.read(g->velocity);
        CHECK(now >= last);
        last = now;
    }
    Vector<double> scan = Vector<double>::Zero(s.nodes()), scan_w = scan;
    for (const auto& f : history)
        for (int j = 0; j < s.nodes(); ++j)
            for (int i = 0; i < s.cells(); ++i) {
                scan(j) = std::max(scan(j), f(i, j));
                if (i >= 1 && i < 3) scan_w(j) = std::max(scan_w(j), f(i, j));
            }
    CHECK(acc.pointwise() == scan);
    CHECK(window.pointwise() == scan_w);
    CHECK_THROWS_AS(SupDensityAccumulator<double>(s, 3, 3), ConfigError);
}

TEST_CASE("entropy: examples") {
    // vmax = 2, n = 4 gives unit velocity weight; one cell of unit length
    const auto g = make_discretization(1, 2.0, 4, 4);
    State<double> s(g, AlphaParam<double>(0.0));
    CHECK(entropy(s) == 0.0);
    s.f.setConstant(1.0);
    CHECK(entropy(s) == doctest::Approx(16 * 2 * std::log(2.0)).epsilon(1e-15));

    const auto g2 = make_discretization(3, 2.0, 8, 4);
    State<double> r(g2, AlphaParam<double>(0.0));
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(0, 3);
    for (int i = 0; i < r.cells(); ++i)
        for (int j = 0; j < r.nodes(); ++j) r.f(i, j) = U(rng);
    r.f(1, 5) = 0.0;
    const double ref = (double)direct(r).entropy;
    CHECK(std::abs(entropy(r) - ref) <= 1e-14 * ref);

    r.alpha = AlphaParam<double>(0.0625);
    CHECK_THROWS_AS(entropy(r), ConfigError);
}

TEST_CASE("bulk_velocity: examples") {
    const auto g = make_discretization(3, 4.0, 32, 4);
    const auto even = gaussian(g, 0.0, 0.7);
    for (const auto& u : bulk_velocity(even)) {
        REQUIRE(u.has_value());
        CHECK(std::abs(*u) <= 1e-15);
    }
    const auto shifted = gaussian(g, 0.3, 0.7);
    for (const auto& u : bulk_velocity(shifted)) {
        REQUIRE(u.has_value());
        CHECK(std::abs(*u - 0.3) <= 0.02);
    }
    State<double> zero(g, AlphaParam<double>(0.0));
    for (const auto& u : bulk_velocity(zero)) CHECK(!u.has_value());
}

TEST_CASE("record_diagnostics: consistent fields") {
    const auto g = make_discretization(2, 2.0, 8, 8);
    const auto s = gaussian(g, 0.1, 0.6);
    CollisionOperator<double> op(g->velocity, g->angle, KernelSpec<double>{});
    SupDensityAccumulator<double> acc(s);
    const auto rec = record_diagnostics(op, s, 0.01, std::vector<double>{1.0, 2.0}, acc);
    CHECK(rec.mass == moments(s).mass);
    CHECK(rec.sup_norm == s.f.maxCoeff());
    CHECK(rec.entropy.has_value());
    REQUIRE(rec.tails.size() == 2);
    CHECK(rec.tails[0].second.mass >= rec.tails[1].second.mass);
    CHECK(rec.bony == doctest::Approx(bony_functional(s, KernelSpec<double>{})).epsilon(1e-14));
}
