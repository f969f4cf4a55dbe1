#pragma once

// Command-line front end. Subcommands: bench, ode, phase, mc-vs-ode.
// Flags override values loaded from a `--config key = value` file.
// Exit codes: 0 success, 1 validation/usage error, 2 runtime failure.

#include "substream/bench.hpp"
#include "substream/theory.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace substream {

namespace cli_detail {

inline std::vector<double> parse_grid(const std::string& spec) {
    // lo:hi:count, endpoints inclusive
    double lo = 0.0, hi = 0.0;
    int count = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1)
        throw InvalidParamsError("grid must be lo:hi:count with count >= 1: " + spec);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < count; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    return out;
}

inline std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

inline LoadingSpec parse_loading(const std::string& s, bool fixed_across_trials) {
    LoadingSpec spec;
    if (s == "ones") {
        spec.kind = LoadingKind::Ones;
    } else if (s == "uniform") {
        spec.kind = fixed_across_trials ? LoadingKind::UniformFixed : LoadingKind::UniformPerTrial;
    } else {
        const auto parts = split_csv(s);
        if (parts.empty()) throw InvalidParamsError("--loading: empty value");
        spec.kind = LoadingKind::Explicit;
        spec.values.resize(static_cast<Eigen::Index>(parts.size()));
        for (std::size_t i = 0; i < parts.size(); ++i)
            spec.values[static_cast<Eigen::Index>(i)] = std::stod(parts[i]);
    }
    return spec;
}

/// Flat `key = value` config file; '#' starts a comment. Returned as
/// --key=value argument strings.
inline std::vector<std::string> load_config_args(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParamsError("--config: cannot open file: " + path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string v) {
            const auto a = v.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = v.find_last_not_of(" \t\r");
            return v.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || key == "config") continue;
        out.push_back("--" + key + "=" + value);
    }
    return out;
}

/// Splices config-file values in front of the explicit flags so that, with a
/// take-last policy, the command line wins.
inline std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    if (args.empty()) return args;
    std::string config_path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config" && i + 1 < args.size())
            config_path = args[i + 1];
        else if (a.rfind("--config=", 0) == 0)
            config_path = a.substr(9);
    }
    if (config_path.empty()) return args;
    std::vector<std::string> out;
    out.push_back(args[0]);
    for (auto& kv : load_config_args(config_path)) out.push_back(kv);
    for (std::size_t i = 1; i < args.size(); ++i) out.push_back(args[i]);
    return out;
}

struct OutputFile {
    // writes to the path, or stdout when the path is empty
    explicit OutputFile(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::binary);
            if (!file) throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file.is_open() ? static_cast<std::ostream&>(file) : std::cout; }
    std::ofstream file;
};

/// Final 1 - s^2 of one PETRELS rank-1 run at dimension d (phase-map cell).
inline double petrels_final_error(double alpha, double sigma, double mu, int d, double t_max,
                                  double s0, double delta_prime, std::uint64_t seed) {
    if (mu >= d)
        throw InvalidParamsError("petrels run: mu >= d makes the discount non-positive");
    RandomStream aux(split_seed(seed, 0));
    RandomStream data(split_seed(seed, 1));
    const Subspace truth = make_ground_truth(d, 1, aux.bits());
    const Vector u_star = truth.basis.col(0);
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = aux.normal();
    v -= v.dot(u_star) * u_star;
    v.normalize();
    const Subspace init(Matrix(s0 * u_star + std::sqrt(1.0 - s0 * s0) * v));

    SpikedModelConfig model;
    model.d = d;
    model.k = 1;
    model.loading = Vector::Ones(1);
    model.sigma = sigma;
    model.alpha = alpha;

    TrackerParams tp;
    tp.discount = 1.0 - mu / d;
    tp.delta = delta_prime / d;
    PetrelsTracker tracker(init, tp.discount, tp.delta, tp.ridge);
    const long total = std::lround(t_max * d);
    for (long n = 1; n <= total; ++n) {
        auto [x, obs] = next_snapshot(model, truth, data, n);
        (void)x;
        tracker.update(obs);
    }
    const double s = cosine_similarity(tracker.raw_factor().col(0), u_star);
    return 1.0 - s * s;
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"substream: streaming PCA / subspace tracking with missing data"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help and exit");
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    // ------------------------------------------------------------------ bench
    auto* bench = app.add_subcommand("bench", "Run a tracker panel over a synthetic scenario");
    std::string b_scenario = "static";
    int b_d = 200, b_k = 10, b_trials = 50;
    long b_snapshots = 5000, b_change_at = 4000, b_record_every = 10;
    double b_sigma = 1e-5, b_alpha = 0.5, b_delta0 = 1e-5;
    double b_discount = 0.98, b_delta = 1.0, b_oja_step = 0.5;
    std::uint64_t b_seed = 0;
    std::string b_loading = "ones", b_trackers = "grouse,petrels,oja,md-isvd,brand,pimc";
    std::string b_out, b_records_out;
    bool b_no_timing = false, b_debug_checksum = false, b_loading_fixed = false;
    double b_grouse_step = 0.0, b_ridge = 0.0;
    bench->set_help_flag("--help", "print help and exit");
    std::string b_config;
    bench->add_option("--config", b_config, "key = value defaults file (flags take precedence)");
    bench->add_option("--scenario", b_scenario, "static | abrupt | rotating")
        ->check(CLI::IsMember({"static", "abrupt", "rotating"}));
    bench->add_option("--d", b_d, "ambient dimension")->check(CLI::Range(2, 1000000));
    bench->add_option("--k", b_k, "subspace rank")->check(CLI::Range(1, 1000000));
    bench->add_option("--sigma", b_sigma, "noise level")->check(CLI::NonNegativeNumber);
    auto* alpha_opt = bench->add_option("--alpha", b_alpha, "observation probability in (0, 1]");
    bench->add_option("--loading", b_loading, "ones | uniform | comma-separated values");
    bench->add_flag("--loading-fixed", b_loading_fixed,
                    "sample the uniform loading once instead of per trial");
    bench->add_option("--trackers", b_trackers, "comma-separated tracker names");
    bench->add_option("--trials", b_trials, "independent trials")->check(CLI::Range(1, 1000000));
    auto* snaps_opt =
        bench->add_option("--snapshots", b_snapshots, "stream length")->check(CLI::Range(1L, 2000000000L));
    auto* change_opt = bench->add_option("--change-at", b_change_at,
                                         "abrupt scenario: first snapshot of the new subspace");
    bench->add_option("--delta0", b_delta0, "rotating scenario: per-step rotation parameter");
    bench->add_option("--seed", b_seed, "base seed");
    bench->add_option("--record-every", b_record_every, "metric recording stride")
        ->check(CLI::Range(1L, 2000000000L));
    bench->add_option("--out", b_out, "aggregate CSV path")->required();
    bench->add_option("--records-out", b_records_out, "per-trial records CSV path");
    bench->add_flag("--no-timing", b_no_timing, "zero the wall_ns column (byte-stable output)");
    bench->add_flag("--debug-checksum", b_debug_checksum, "append a stream checksum column");
    bench->add_option("--discount", b_discount, "discount for brand/past/petrels");
    bench->add_option("--delta", b_delta, "RLS initialization scale for past/petrels");
    bench->add_option("--oja-step", b_oja_step, "constant step for oja");
    auto* gstep_opt =
        bench->add_option("--grouse-step", b_grouse_step, "constant step for grouse (default greedy)");
    auto* ridge_opt = bench->add_option(
        "--ridge", b_ridge, "ridge fallback for rank-deficient masked systems (default: skip)");

    // ------------------------------------------------------------------ ode
    auto* ode = app.add_subcommand("ode", "Integrate a limiting ODE and emit the trajectory");
    std::string o_model = "oja-grouse", o_out;
    OdeParams o_params;
    ode->set_help_flag("--help", "print help and exit");
    std::string o_config;
    ode->add_option("--config", o_config, "key = value defaults file (flags take precedence)");
    ode->add_option("--model", o_model, "oja-grouse | petrels")
        ->check(CLI::IsMember({"oja-grouse", "petrels"}));
    ode->add_option("--alpha", o_params.alpha, "observation probability");
    ode->add_option("--sigma", o_params.sigma, "noise level");
    ode->add_option("--tau", o_params.tau, "rescaled step (oja-grouse)");
    ode->add_option("--mu", o_params.mu, "rescaled discount (petrels)");
    ode->add_option("--s0", o_params.s0, "initial cosine similarity");
    ode->add_option("--g0", o_params.g0, "initial auxiliary value (petrels)");
    ode->add_option("--t-max", o_params.t_max, "horizon in rescaled time");
    ode->add_option("--h", o_params.h, "integrator step");
    ode->add_option("--out", o_out, "CSV path (default: stdout)");

    // ------------------------------------------------------------------ phase
    auto* phase = app.add_subcommand(
        "phase", "PETRELS steady-state error over an (alpha, mu) grid with the threshold");
    std::string p_alpha_grid = "0.05:1.0:20", p_mu_grid = "1:100:25", p_mode = "mc", p_out;
    double p_sigma = 0.2, p_t_max = 50.0, p_s0 = 0.3, p_delta_prime = 1.0;
    int p_d = 2000, p_trials = 1;
    std::uint64_t p_seed = 0;
    phase->set_help_flag("--help", "print help and exit");
    std::string p_config;
    phase->add_option("--config", p_config, "key = value defaults file (flags take precedence)");
    phase->add_option("--sigma", p_sigma, "noise level")->required();
    phase->add_option("--alpha-grid", p_alpha_grid, "lo:hi:count");
    phase->add_option("--mu-grid", p_mu_grid, "lo:hi:count");
    phase->add_option("--d", p_d, "simulation dimension")->check(CLI::Range(4, 1000000));
    phase->add_option("--trials", p_trials, "runs per grid cell (median reported)")
        ->check(CLI::Range(1, 1000000));
    phase->add_option("--t-max", p_t_max, "horizon in rescaled time");
    phase->add_option("--s0", p_s0, "initial cosine similarity");
    phase->add_option("--delta-prime", p_delta_prime, "delta = delta_prime / d");
    phase->add_option("--seed", p_seed, "base seed");
    phase->add_option("--mode", p_mode, "mc (tracker runs) | ode (integrate the limit)")
        ->check(CLI::IsMember({"mc", "ode"}));
    phase->add_option("--out", p_out, "CSV path (default: stdout)");

    // ------------------------------------------------------------------ mc-vs-ode
    auto* mc = app.add_subcommand("mc-vs-ode",
                                  "Monte Carlo tracker runs against the ODE prediction");
    std::string m_model = "oja-grouse", m_out;
    McVsOdeConfig m_cfg;
    mc->set_help_flag("--help", "print help and exit");
    std::string m_config;
    mc->add_option("--config", m_config, "key = value defaults file (flags take precedence)");
    mc->add_option("--model", m_model, "oja-grouse | petrels")
        ->check(CLI::IsMember({"oja-grouse", "petrels"}));
    mc->add_option("--d", m_cfg.d, "simulation dimension")->check(CLI::Range(4, 1000000));
    mc->add_option("--trials", m_cfg.trials, "independent trials")->check(CLI::Range(2, 1000000));
    mc->add_option("--alpha", m_cfg.ode.alpha, "observation probability");
    mc->add_option("--sigma", m_cfg.ode.sigma, "noise level");
    mc->add_option("--tau", m_cfg.ode.tau, "rescaled step (oja-grouse)");
    mc->add_option("--mu", m_cfg.ode.mu, "rescaled discount (petrels)");
    mc->add_option("--delta-prime", m_cfg.delta_prime, "delta = delta_prime / d");
    mc->add_option("--s0", m_cfg.ode.s0, "initial cosine similarity");
    mc->add_option("--t-max", m_cfg.ode.t_max, "horizon in rescaled time");
    mc->add_option("--h", m_cfg.ode.h, "ODE integrator step");
    mc->add_option("--seed", m_cfg.seed, "base seed");
    mc->add_option("--out", m_out, "CSV path (default: stdout)");

    // ------------------------------------------------------------------ parse
    std::vector<std::string> argv_store;
    argv_store.push_back("substream");
    try {
        for (const auto& a : cli_detail::expand_config(args)) argv_store.push_back(a);
    } catch (const InvalidParamsError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        std::cerr << "run with --help for usage\n";
        return 1;
    }

    try {
        if (app.got_subcommand(bench)) {
            // scenario-dependent defaults for values the user did not pass
            ScenarioKind kind = ScenarioKind::Static;
            if (b_scenario == "abrupt") kind = ScenarioKind::AbruptChange;
            if (b_scenario == "rotating") kind = ScenarioKind::Rotating;
            if (kind == ScenarioKind::AbruptChange) {
                if (snaps_opt->count() == 0) b_snapshots = 8000;
                if (change_opt->count() == 0) b_change_at = 4000;
                if (alpha_opt->count() == 0) b_alpha = 0.3;
                if (bench->get_option("--loading")->count() == 0) b_loading = "uniform";
            } else if (kind == ScenarioKind::Rotating) {
                if (alpha_opt->count() == 0) b_alpha = 0.3;
            }
            if (!(b_alpha > 0.0 && b_alpha <= 1.0)) {
                std::cerr << "invalid --alpha: must be in (0, 1]\n";
                return 1;
            }

            BenchConfig cfg;
            cfg.scenario.kind = kind;
            cfg.scenario.snapshots = b_snapshots;
            cfg.scenario.change_at = b_change_at;
            cfg.scenario.delta0 = b_delta0;
            cfg.model.d = b_d;
            cfg.model.k = b_k;
            cfg.model.sigma = b_sigma;
            cfg.model.alpha = b_alpha;
            cfg.model.loading = Vector::Ones(b_k);  // placeholder, resolved per trial
            cfg.loading = cli_detail::parse_loading(b_loading, b_loading_fixed);
            cfg.trials = b_trials;
            cfg.record_every = b_record_every;
            cfg.seed = b_seed;
            cfg.no_timing = b_no_timing;
            cfg.debug_checksum = b_debug_checksum;

            TrackerParams params;
            params.discount = b_discount;
            params.delta = b_delta;
            if (ridge_opt->count() > 0) params.ridge = b_ridge;
            for (const auto& name : cli_detail::split_csv(b_trackers)) {
                TrackerSpec spec;
                spec.kind = parse_tracker_kind(name);
                spec.params = params;
                if (spec.kind == TrackerKind::Oja || spec.kind == TrackerKind::Krasulina)
                    spec.params.step = b_oja_step;
                if (spec.kind == TrackerKind::Grouse && gstep_opt->count() > 0)
                    spec.params.step = b_grouse_step;
                spec.label = name;
                cfg.trackers.push_back(std::move(spec));
            }

            const BenchResult result = run_bench(cfg);
            {
                cli_detail::OutputFile out(b_out);
                write_aggregates_csv(out.stream(), result.aggregates);
            }
            if (!b_records_out.empty()) {
                cli_detail::OutputFile out(b_records_out);
                write_records_csv(out.stream(), result.records, cfg.debug_checksum);
            }
            return 0;
        }

        if (app.got_subcommand(ode)) {
            cli_detail::OutputFile out(o_out);
            if (o_model == "petrels") {
                const OdeTrajectory traj = integrate_petrels_ode(o_params);
                out.stream() << "t,s,g,error\n";
                for (std::size_t i = 0; i < traj.times.size(); ++i)
                    out.stream() << detail::fmt_double(traj.times[i]) << ','
                                 << detail::fmt_double(traj.s[i]) << ','
                                 << detail::fmt_double(traj.g[i]) << ','
                                 << detail::fmt_double(1.0 - traj.s[i] * traj.s[i]) << "\n";
            } else {
                const OdeTrajectory traj = integrate_oja_grouse_ode(o_params);
                out.stream() << "t,s,error\n";
                for (std::size_t i = 0; i < traj.times.size(); ++i)
                    out.stream() << detail::fmt_double(traj.times[i]) << ','
                                 << detail::fmt_double(traj.s[i]) << ','
                                 << detail::fmt_double(1.0 - traj.s[i] * traj.s[i]) << "\n";
            }
            return 0;
        }

        if (app.got_subcommand(phase)) {
            const auto alphas = cli_detail::parse_grid(p_alpha_grid);
            const auto mus = cli_detail::parse_grid(p_mu_grid);
            cli_detail::OutputFile out(p_out);
            out.stream() << "alpha,mu,mu_star,steady_error\n";
            std::uint64_t cell_index = 0;
            for (double alpha : alphas) {
                if (!(alpha > 0.0 && alpha <= 1.0)) {
                    std::cerr << "invalid --alpha-grid: values must be in (0, 1]\n";
                    return 1;
                }
                const double mu_star = petrels_phase_threshold(alpha, p_sigma);
                for (double mu : mus) {
                    const std::uint64_t cell_seed = split_seed(p_seed, cell_index++);
                    double err;
                    if (p_mode == "ode") {
                        OdeParams op;
                        op.alpha = alpha;
                        op.sigma = p_sigma;
                        op.mu = mu;
                        op.s0 = p_s0;
                        op.g0 = p_delta_prime;
                        op.t_max = p_t_max;
                        op.h = petrels_stable_step(mu);
                        const OdeTrajectory traj = integrate_petrels_ode(op);
                        err = 1.0 - traj.s.back() * traj.s.back();
                    } else if (mu >= p_d) {
                        std::cerr << "phase cell alpha=" << alpha << " mu=" << mu
                                  << " skipped: discount 1 - mu/d is not positive\n";
                        err = std::numeric_limits<double>::quiet_NaN();
                    } else {
                        std::vector<double> errs(static_cast<std::size_t>(p_trials));
                        parallel_for_index(p_trials, [&](int t) {
                            errs[static_cast<std::size_t>(t)] = cli_detail::petrels_final_error(
                                alpha, p_sigma, mu, p_d, p_t_max, p_s0, p_delta_prime,
                                split_seed(cell_seed, static_cast<std::uint64_t>(t)));
                        });
                        err = aggregate_quantiles(errs, {0.5})[0];
                    }
                    out.stream() << detail::fmt_double(alpha) << ',' << detail::fmt_double(mu)
                                 << ',' << detail::fmt_double(mu_star) << ','
                                 << detail::fmt_double(err) << "\n";
                }
            }
            return 0;
        }

        if (app.got_subcommand(mc)) {
            m_cfg.model = (m_model == "petrels") ? McModel::Petrels : McModel::OjaGrouse;
            if (m_cfg.model == McModel::Petrels)
                m_cfg.ode.h = petrels_stable_step(m_cfg.ode.mu, m_cfg.ode.h);
            const McVsOdeReport rep = mc_vs_ode_report(m_cfg);
            cli_detail::OutputFile out(m_out);
            out.stream() << "t,ode_error";
            for (const auto& c : rep.curves) out.stream() << ',' << c.name << "_mean," << c.name << "_std";
            out.stream() << "\n";
            for (std::size_t j = 0; j < rep.times.size(); ++j) {
                out.stream() << detail::fmt_double(rep.times[j]) << ','
                             << detail::fmt_double(rep.ode_error[j]);
                for (const auto& c : rep.curves)
                    out.stream() << ',' << detail::fmt_double(c.mean[j]) << ','
                                 << detail::fmt_double(c.stddev[j]);
                out.stream() << "\n";
            }
            return 0;
        }
    } catch (const InvalidParamsError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 1;
    } catch (const UnknownTrackerError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

inline int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

}  // namespace substream
