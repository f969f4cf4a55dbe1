#pragma once

// High-dimensional scaling limits: fixed-step RK4 integration of the limiting
// ODEs for PETRELS and for Oja/GROUSE, the closed-form solution of the latter,
// steady states, the PETRELS phase-transition boundary, and a Monte Carlo
// harness that compares rank-1 tracker runs against the predictions.

#include "substream/core.hpp"
#include "substream/datagen.hpp"
#include "substream/parallel.hpp"
#include "substream/rng.hpp"
#include "substream/trackers.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace substream {

struct OdeParams {
    double alpha = 1.0;   // observation probability
    double sigma = 0.0;   // noise level
    double tau = 0.0;     // rescaled step (eta = tau / d), Oja/GROUSE
    double mu = 0.0;      // rescaled discount (lambda = 1 - mu / d), PETRELS
    double s0 = 0.1;      // initial cosine similarity
    double g0 = 1.0;      // initial auxiliary value (PETRELS)
    double t_max = 50.0;  // horizon in rescaled time t = n / d
    double h = 1e-2;      // integrator step

    void validate_common() const {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParamsError("ode: alpha in (0, 1]");
        if (sigma < 0.0) throw InvalidParamsError("ode: sigma must be >= 0");
        if (!(h > 0.0)) throw InvalidParamsError("ode: h must be > 0");
        if (!(t_max > 0.0)) throw InvalidParamsError("ode: t_max must be > 0");
        if (!(s0 > -1.0 && s0 < 1.0)) throw InvalidParamsError("ode: s0 in (-1, 1)");
    }
};

struct OdeTrajectory {
    std::vector<double> times;
    std::vector<double> s;
    std::vector<double> g;  // empty for the Oja/GROUSE limit

    double linear_sample(double t) const {
        if (times.empty()) throw EmptyInputError("trajectory is empty");
        if (t <= times.front()) return s.front();
        if (t >= times.back()) return s.back();
        const auto it = std::lower_bound(times.begin(), times.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - times.begin());
        const double t1 = times[j - 1], t2 = times[j];
        const double f = (t - t1) / (t2 - t1);
        return (1.0 - f) * s[j - 1] + f * s[j];
    }
};

namespace detail {

inline void clamp_similarity(double& s) {
    if (!std::isfinite(s))
        throw std::runtime_error("ode: state diverged; reduce the step h");
    const double overshoot = std::abs(s) - 1.0;
    if (overshoot <= 0.0) return;
    if (overshoot <= 1e-9) {
        s = std::copysign(1.0, s);
    } else if (overshoot > 1e-6) {
        throw std::runtime_error(
            "ode: |s| exceeded 1 by " + std::to_string(overshoot) +
            "; parameters are outside the regime where the limit is valid (or h is too coarse)");
    }
}

}  // namespace detail

/// Coupled (s, g) limit of PETRELS, integrated with classical RK4.
inline OdeTrajectory integrate_petrels_ode(const OdeParams& p) {
    p.validate_common();
    if (!(p.mu > 0.0)) throw InvalidParamsError("petrels ode: mu must be > 0");
    const double a = p.alpha, s2 = p.sigma * p.sigma;
    const auto fs = [&](double s, double g) {
        return a * s * (1.0 - s * s) * g - 0.5 * s2 * (a * s * s + s2) * s * g * g;
    };
    const auto fg = [&](double s, double g) {
        return -g * g * (s2 * g + 1.0) * (a * s * s + s2) + p.mu * g;
    };
    const long n = static_cast<long>(std::ceil(p.t_max / p.h - 1e-12));
    OdeTrajectory out;
    out.times.reserve(n + 1);
    out.s.reserve(n + 1);
    out.g.reserve(n + 1);
    double s = p.s0, g = p.g0;
    out.times.push_back(0.0);
    out.s.push_back(s);
    out.g.push_back(g);
    for (long i = 0; i < n; ++i) {
        const double k1s = fs(s, g), k1g = fg(s, g);
        const double k2s = fs(s + 0.5 * p.h * k1s, g + 0.5 * p.h * k1g);
        const double k2g = fg(s + 0.5 * p.h * k1s, g + 0.5 * p.h * k1g);
        const double k3s = fs(s + 0.5 * p.h * k2s, g + 0.5 * p.h * k2g);
        const double k3g = fg(s + 0.5 * p.h * k2s, g + 0.5 * p.h * k2g);
        const double k4s = fs(s + p.h * k3s, g + p.h * k3g);
        const double k4g = fg(s + p.h * k3s, g + p.h * k3g);
        s += p.h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
        g += p.h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
        if (!std::isfinite(g) || std::abs(g) > 1e12)
            throw std::runtime_error(
                "petrels ode: auxiliary state diverged (the g equation is stiff for "
                "large mu); reduce the step h");
        detail::clamp_similarity(s);
        out.times.push_back((i + 1) * p.h);
        out.s.push_back(s);
        out.g.push_back(g);
    }
    return out;
}

/// Shared cubic limit of Oja's method and GROUSE.
inline OdeTrajectory integrate_oja_grouse_ode(const OdeParams& p) {
    p.validate_common();
    if (!(p.tau > 0.0)) throw InvalidParamsError("oja/grouse ode: tau must be > 0");
    const double s2 = p.sigma * p.sigma;
    const double a = p.tau * (p.alpha - 0.5 * p.tau * s2 * s2);
    const double b = p.alpha * p.tau * (1.0 + 0.5 * p.tau * s2);
    const auto f = [&](double s) { return a * s - b * s * s * s; };
    const long n = static_cast<long>(std::ceil(p.t_max / p.h - 1e-12));
    OdeTrajectory out;
    out.times.reserve(n + 1);
    out.s.reserve(n + 1);
    double s = p.s0;
    out.times.push_back(0.0);
    out.s.push_back(s);
    for (long i = 0; i < n; ++i) {
        const double k1 = f(s);
        const double k2 = f(s + 0.5 * p.h * k1);
        const double k3 = f(s + 0.5 * p.h * k2);
        const double k4 = f(s + p.h * k3);
        s += p.h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        detail::clamp_similarity(s);
        out.times.push_back((i + 1) * p.h);
        out.s.push_back(s);
    }
    return out;
}

/// Closed-form solution of the Oja/GROUSE limit (logistic in s^2).
inline double oja_grouse_closed_form(const OdeParams& p, double t) {
    const double s2n = p.sigma * p.sigma;
    const double a = p.tau * (p.alpha - 0.5 * p.tau * s2n * s2n);
    const double b = p.alpha * p.tau * (1.0 + 0.5 * p.tau * s2n);
    const double y0 = p.s0 * p.s0;
    double y;
    if (a == 0.0) {
        y = y0 / (1.0 + 2.0 * b * y0 * t);
    } else {
        const double e = std::exp(2.0 * a * t);
        y = a * y0 * e / (a + b * y0 * (e - 1.0));
    }
    return std::copysign(std::sqrt(std::max(y, 0.0)), p.s0);
}

/// Steady state of the Oja/GROUSE limit: sqrt(a/b) when a > 0, else 0.
inline double oja_grouse_fixed_point(double alpha, double sigma, double tau) {
    if (!(tau > 0.0)) throw InvalidParamsError("fixed point: tau must be > 0");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParamsError("fixed point: alpha in (0, 1]");
    const double s2 = sigma * sigma;
    const double a = tau * (alpha - 0.5 * tau * s2 * s2);
    const double b = alpha * tau * (1.0 + 0.5 * tau * s2);
    return a > 0.0 ? std::sqrt(a / b) : 0.0;
}

/// Integrator step that keeps RK4 stable on the g equation, whose relaxation
/// rate grows with mu.
inline double petrels_stable_step(double mu, double h_default = 1e-2) {
    return std::min(h_default, 0.25 / std::max(mu, 1.0));
}

/// Critical discount rate: PETRELS is informative iff mu < mu*.
inline double petrels_phase_threshold(double alpha, double sigma) {
    if (sigma == 0.0)
        throw ZeroNoiseError("phase threshold diverges at sigma = 0 (informative for all mu)");
    const double r = 2.0 * alpha / (sigma * sigma) + 0.5;
    return r * r - 0.25;
}

// ---------------------------------------------------------------------------
// Monte Carlo vs. ODE comparison (rank-1)

enum class McModel { OjaGrouse, Petrels };

struct McVsOdeConfig {
    McModel model = McModel::OjaGrouse;
    OdeParams ode;
    int d = 2000;
    int trials = 50;
    std::uint64_t seed = 0;
    double delta_prime = 1.0;  // PETRELS: delta = delta_prime / d
};

struct McVsOdeReport {
    std::vector<double> times;
    std::vector<double> ode_error;  // 1 - s^2 predicted by the limit
    struct Curve {
        std::string name;
        std::vector<double> mean;  // mean of 1 - s^2 across trials
        std::vector<double> stddev;
    };
    std::vector<Curve> curves;
};

/// Runs rank-1 tracker simulations at dimension d and tabulates the error
/// 1 - s^2 against the ODE prediction on a shared time grid (every
/// ceil(d/20) snapshots). Trial i uses substream i of the seed; within a
/// trial the trackers consume identical observations.
inline McVsOdeReport mc_vs_ode_report(const McVsOdeConfig& cfg) {
    cfg.ode.validate_common();
    if (cfg.d < 4) throw InvalidParamsError("mc_vs_ode: d too small");
    if (cfg.trials < 2) throw InvalidParamsError("mc_vs_ode: need at least 2 trials");
    if (cfg.model == McModel::Petrels) {
        if (!(cfg.ode.mu > 0.0)) throw InvalidParamsError("mc_vs_ode: mu must be > 0");
        if (cfg.ode.mu >= cfg.d)
            throw InvalidParamsError("mc_vs_ode: mu must be < d so that the discount stays in (0, 1)");
        if (!(cfg.delta_prime > 0.0)) throw InvalidParamsError("mc_vs_ode: delta_prime > 0");
    } else {
        if (!(cfg.ode.tau > 0.0)) throw InvalidParamsError("mc_vs_ode: tau must be > 0");
    }

    const int d = cfg.d;
    const long stride = (d + 19) / 20;
    const long total = std::lround(cfg.ode.t_max * d);
    const long points = total / stride;
    if (points < 1) throw InvalidParamsError("mc_vs_ode: horizon too short to record");

    McVsOdeReport rep;
    rep.times.resize(points);
    for (long j = 0; j < points; ++j)
        rep.times[static_cast<std::size_t>(j)] =
            static_cast<double>((j + 1) * stride) / static_cast<double>(d);

    const OdeTrajectory ode = (cfg.model == McModel::Petrels)
                                  ? integrate_petrels_ode(cfg.ode)
                                  : integrate_oja_grouse_ode(cfg.ode);
    rep.ode_error.resize(points);
    for (long j = 0; j < points; ++j) {
        const double s = ode.linear_sample(rep.times[static_cast<std::size_t>(j)]);
        rep.ode_error[static_cast<std::size_t>(j)] = 1.0 - s * s;
    }

    const int n_trackers = (cfg.model == McModel::OjaGrouse) ? 2 : 1;
    // errors[trk][trial][point]
    std::vector<std::vector<std::vector<double>>> errors(
        n_trackers, std::vector<std::vector<double>>(cfg.trials));

    parallel_for_index(cfg.trials, [&](int trial) {
        RandomStream aux(split_seed(cfg.seed, 2 * static_cast<std::uint64_t>(trial)));
        RandomStream data(split_seed(cfg.seed, 2 * static_cast<std::uint64_t>(trial) + 1));
        const Subspace truth = make_ground_truth(d, 1, aux.bits());
        const Vector u_star = truth.basis.col(0);
        Vector v(d);
        for (int i = 0; i < d; ++i) v[i] = aux.normal();
        v -= v.dot(u_star) * u_star;
        v.normalize();
        Matrix U0 = cfg.ode.s0 * u_star + std::sqrt(1.0 - cfg.ode.s0 * cfg.ode.s0) * v;
        const Subspace init(U0);

        SpikedModelConfig model;
        model.d = d;
        model.k = 1;
        model.loading = Vector::Ones(1);
        model.sigma = cfg.ode.sigma;
        model.alpha = cfg.ode.alpha;

        std::vector<std::unique_ptr<Tracker>> trackers;
        if (cfg.model == McModel::OjaGrouse) {
            TrackerParams tp;
            tp.step = cfg.ode.tau / d;
            trackers.push_back(make_tracker(TrackerKind::Oja, tp, init));
            trackers.push_back(make_tracker(TrackerKind::Grouse, tp, init));
        } else {
            TrackerParams tp;
            tp.discount = 1.0 - cfg.ode.mu / d;
            tp.delta = cfg.delta_prime / d;
            trackers.push_back(make_tracker(TrackerKind::Petrels, tp, init));
        }
        for (int trk = 0; trk < n_trackers; ++trk)
            errors[static_cast<std::size_t>(trk)][static_cast<std::size_t>(trial)].resize(points);

        for (long n = 1; n <= points * stride; ++n) {
            auto [x, obs] = next_snapshot(model, truth, data, n);
            (void)x;
            for (auto& t : trackers) t->update(obs);
            if (n % stride == 0) {
                const long j = n / stride - 1;
                for (int trk = 0; trk < n_trackers; ++trk) {
                    Vector est;
                    if (cfg.model == McModel::Petrels) {
                        est = static_cast<PetrelsTracker*>(trackers[static_cast<std::size_t>(trk)].get())
                                  ->raw_factor()
                                  .col(0);
                    } else {
                        est = trackers[static_cast<std::size_t>(trk)]->estimate().basis.col(0);
                    }
                    const double s = cosine_similarity(est, u_star);
                    errors[static_cast<std::size_t>(trk)][static_cast<std::size_t>(trial)]
                          [static_cast<std::size_t>(j)] = 1.0 - s * s;
                }
            }
        }
    });

    for (int trk = 0; trk < n_trackers; ++trk) {
        McVsOdeReport::Curve curve;
        curve.name = (cfg.model == McModel::Petrels) ? "petrels" : (trk == 0 ? "oja" : "grouse");
        curve.mean.resize(points);
        curve.stddev.resize(points);
        for (long j = 0; j < points; ++j) {
            double sum = 0.0;
            for (int t = 0; t < cfg.trials; ++t)
                sum += errors[static_cast<std::size_t>(trk)][static_cast<std::size_t>(t)]
                             [static_cast<std::size_t>(j)];
            const double mean = sum / cfg.trials;
            double ss = 0.0;
            for (int t = 0; t < cfg.trials; ++t) {
                const double dlt = errors[static_cast<std::size_t>(trk)][static_cast<std::size_t>(t)]
                                         [static_cast<std::size_t>(j)] -
                                   mean;
                ss += dlt * dlt;
            }
            curve.mean[static_cast<std::size_t>(j)] = mean;
            curve.stddev[static_cast<std::size_t>(j)] = std::sqrt(ss / (cfg.trials - 1));
        }
        rep.curves.push_back(std::move(curve));
    }
    return rep;
}

}  // namespace substream
