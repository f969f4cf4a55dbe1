#include "substream/theory.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace substream;

TEST_CASE("oja/grouse ode: s = 0 is invariant") {
    OdeParams p;
    p.alpha = 0.5;
    p.sigma = 0.3;
    p.tau = 1.0;
    p.s0 = 0.0;
    p.t_max = 5.0;
    const OdeTrajectory traj = integrate_oja_grouse_ode(p);
    for (double s : traj.s) REQUIRE(s == 0.0);
}

TEST_CASE("petrels ode: s = 0 is invariant") {
    OdeParams p;
    p.alpha = 0.17;
    p.sigma = 0.2;
    p.mu = 40.0;
    p.s0 = 0.0;
    p.g0 = 1.0;
    p.t_max = 5.0;
    p.h = petrels_stable_step(p.mu);
    const OdeTrajectory traj = integrate_petrels_ode(p);
    for (double s : traj.s) REQUIRE(s == 0.0);
}

TEST_CASE("oja/grouse ode matches the closed form") {
    RandomStream rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        OdeParams p;
        p.alpha = 0.1 + 0.9 * rng.uniform01();
        p.sigma = 0.6 * rng.uniform01();
        p.tau = 0.2 + 1.3 * rng.uniform01();
        p.s0 = 0.05 + 0.85 * rng.uniform01();
        p.t_max = 10.0;
        p.h = 1e-2;
        const OdeTrajectory traj = integrate_oja_grouse_ode(p);
        for (int j = 1; j <= 100; ++j) {
            const double t = p.t_max * j / 100.0;
            const double ref = oja_grouse_closed_form(p, t);
            REQUIRE(traj.linear_sample(t) == Catch::Approx(ref).margin(1e-8));
        }
    }
}

TEST_CASE("oja/grouse ode: rk4 step-halving ratio is fourth order") {
    OdeParams p;
    p.alpha = 0.6;
    p.sigma = 0.25;
    p.tau = 1.2;
    p.s0 = 0.15;
    p.t_max = 8.0;

    const auto max_err = [&](double h) {
        OdeParams q = p;
        q.h = h;
        const OdeTrajectory traj = integrate_oja_grouse_ode(q);
        double worst = 0.0;
        for (int j = 1; j <= 100; ++j) {
            const double t = p.t_max * j / 100.0;
            worst = std::max(worst, std::abs(traj.linear_sample(t) - oja_grouse_closed_form(p, t)));
        }
        return worst;
    };
    // sample on the coarse grid so interpolation error does not pollute the ratio
    const double e1 = max_err(0.08);
    const double e2 = max_err(0.04);
    REQUIRE(e1 / e2 >= 12.0);
    REQUIRE(e1 / e2 <= 20.0);
}

TEST_CASE("petrels ode: step halving is converged at the stable step") {
    OdeParams p;
    p.alpha = 0.17;
    p.sigma = 0.2;
    p.mu = 40.0;
    p.s0 = 0.1;
    p.g0 = 1.0;
    p.t_max = 200.0;
    p.h = 1e-2;
    const double s_h = integrate_petrels_ode(p).s.back();
    p.h = 5e-3;
    const double s_h2 = integrate_petrels_ode(p).s.back();
    REQUIRE(std::abs(s_h - s_h2) < 1e-8);
}

TEST_CASE("petrels ode: informative below threshold, decay above") {
    const double alpha = 0.17, sigma = 0.2;
    const double mu_star = petrels_phase_threshold(alpha, sigma);
    REQUIRE(mu_star == Catch::Approx(80.75));

    OdeParams p;
    p.alpha = alpha;
    p.sigma = sigma;
    p.s0 = 0.1;
    p.g0 = 1.0;
    p.t_max = 200.0;

    p.mu = 0.5 * mu_star;
    p.h = petrels_stable_step(p.mu);
    REQUIRE(integrate_petrels_ode(p).s.back() > 0.1);

    p.mu = 1.1 * mu_star;
    p.h = petrels_stable_step(p.mu);
    REQUIRE(integrate_petrels_ode(p).s.back() < 1e-3);
}

TEST_CASE("trajectories never leave [-1, 1] beyond tolerance") {
    OdeParams p;
    p.alpha = 1.0;
    p.sigma = 0.0;
    p.tau = 2.0;
    p.s0 = 0.9;
    p.t_max = 20.0;
    const OdeTrajectory traj = integrate_oja_grouse_ode(p);
    for (double s : traj.s) REQUIRE(std::abs(s) <= 1.0 + 1e-6);
}

TEST_CASE("oja/grouse fixed point") {
    REQUIRE(oja_grouse_fixed_point(0.8, 0.0, 1.3) == Catch::Approx(1.0));
    // boundary alpha = tau sigma^4 / 2 (built with the same rounding as the
    // implementation so the drift coefficient is exactly zero)
    const double sigma = 0.7, tau = 1.1;
    const double s2 = sigma * sigma;
    const double alpha = 0.5 * tau * s2 * s2;
    REQUIRE(oja_grouse_fixed_point(alpha, sigma, tau) == 0.0);

    // long integration converges to the predicted value
    const double a = 1.0 * (0.17 - 0.5 * 1.0 * std::pow(0.2, 4));
    OdeParams p;
    p.alpha = 0.17;
    p.sigma = 0.2;
    p.tau = 1.0;
    p.s0 = 0.2;
    p.t_max = 50.0 / a;
    p.h = 1e-2;
    const double fp = oja_grouse_fixed_point(p.alpha, p.sigma, p.tau);
    REQUIRE(integrate_oja_grouse_ode(p).s.back() == Catch::Approx(fp).margin(1e-4));
}

TEST_CASE("phase threshold formula and monotonicity") {
    REQUIRE(petrels_phase_threshold(1.0, 1.0) == Catch::Approx(6.0));
    REQUIRE(petrels_phase_threshold(0.17, 0.2) == Catch::Approx(80.75));
    REQUIRE(petrels_phase_threshold(0.2, 100.0) < 1e-3);  // sigma -> inf limit
    REQUIRE_THROWS_AS(petrels_phase_threshold(0.5, 0.0), ZeroNoiseError);

    double prev = 0.0;
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double v = petrels_phase_threshold(alpha, 0.3);
        REQUIRE(v > prev);
        prev = v;
    }
    prev = 1e18;
    for (double sigma : {0.1, 0.2, 0.4, 0.8}) {
        const double v = petrels_phase_threshold(0.5, sigma);
        REQUIRE(v < prev);
        prev = v;
    }
}

TEST_CASE("ode parameter validation") {
    OdeParams p;
    p.alpha = 0.0;
    REQUIRE_THROWS_AS(integrate_oja_grouse_ode(p), InvalidParamsError);
    p.alpha = 0.5;
    p.tau = 0.0;
    REQUIRE_THROWS_AS(integrate_oja_grouse_ode(p), InvalidParamsError);
    p.tau = 1.0;
    p.s0 = 1.5;
    REQUIRE_THROWS_AS(integrate_oja_grouse_ode(p), InvalidParamsError);
    p.s0 = 0.1;
    p.mu = 0.0;
    REQUIRE_THROWS_AS(integrate_petrels_ode(p), InvalidParamsError);
}

TEST_CASE("mc vs ode: noise-free sanity at moderate dimension") {
    McVsOdeConfig cfg;
    cfg.model = McModel::OjaGrouse;
    cfg.d = 400;
    cfg.trials = 6;
    cfg.seed = 21;
    cfg.ode.alpha = 1.0;
    cfg.ode.sigma = 0.0;
    cfg.ode.tau = 0.5;
    cfg.ode.s0 = 0.9;
    cfg.ode.t_max = 12.0;
    const McVsOdeReport rep = mc_vs_ode_report(cfg);
    REQUIRE(rep.curves.size() == 2);
    REQUIRE(rep.ode_error.back() < 1e-3);
    for (const auto& curve : rep.curves) {
        REQUIRE(curve.mean.back() < 1e-3);
        for (std::size_t j = 0; j < rep.times.size(); ++j) {
            const double tol = std::max(2.0 * curve.stddev[j], 0.01);
            REQUIRE(std::abs(curve.mean[j] - rep.ode_error[j]) <= tol);
        }
    }
}

TEST_CASE("mc vs ode: petrels path produces finite curves") {
    McVsOdeConfig cfg;
    cfg.model = McModel::Petrels;
    cfg.d = 300;
    cfg.trials = 4;
    cfg.seed = 22;
    cfg.ode.alpha = 0.5;
    cfg.ode.sigma = 0.2;
    cfg.ode.mu = 10.0;
    cfg.ode.s0 = 0.3;
    cfg.ode.t_max = 8.0;
    cfg.ode.h = petrels_stable_step(cfg.ode.mu);
    cfg.delta_prime = 1.0;
    const McVsOdeReport rep = mc_vs_ode_report(cfg);
    REQUIRE(rep.curves.size() == 1);
    for (std::size_t j = 0; j < rep.times.size(); ++j) {
        REQUIRE(std::isfinite(rep.curves[0].mean[j]));
        REQUIRE(rep.curves[0].mean[j] >= 0.0);
        REQUIRE(rep.curves[0].mean[j] <= 1.0 + 1e-9);
    }
    // the run should move toward the ODE steady state rather than diverge
    REQUIRE(std::abs(rep.curves[0].mean.back() - rep.ode_error.back()) <
            std::abs(rep.curves[0].mean.front() - rep.ode_error.back()) + 0.05);
}
