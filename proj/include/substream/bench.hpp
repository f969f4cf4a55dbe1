#pragma once

// Benchmark harness: run tracker panels over spiked-model scenarios across
// independent trials, record projection error / determinant similarity /
// cumulative update time, and aggregate quantile curves for CSV output.

#include "substream/core.hpp"
#include "substream/datagen.hpp"
#include "substream/parallel.hpp"
#include "substream/rng.hpp"
#include "substream/trackers.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace substream {

struct RunRecord {
    std::string tracker;
    int trial = 0;
    long n = 0;
    double proj_error = 0.0;
    double det_sim = 0.0;
    std::int64_t wall_ns = 0;  // cumulative update() time for this tracker
    std::uint64_t stream_crc = 0;
};

struct AggregateRecord {
    std::string tracker;
    long n = 0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    std::int64_t median_wall_ns = 0;
};

/// Linear-interpolation quantiles of an unsorted sample.
inline std::vector<double> aggregate_quantiles(std::vector<double> values,
                                               const std::vector<double>& qs) {
    if (values.empty()) throw EmptyInputError("aggregate_quantiles: empty input");
    for (double q : qs)
        if (!(q >= 0.0 && q <= 1.0))
            throw InvalidParamsError("aggregate_quantiles: quantile outside [0, 1]");
    std::sort(values.begin(), values.end());
    std::vector<double> out;
    out.reserve(qs.size());
    const std::size_t n = values.size();
    for (double q : qs) {
        const double pos = q * static_cast<double>(n - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        const double v = (lo + 1 < n) ? (1.0 - frac) * values[lo] + frac * values[lo + 1]
                                      : values[lo];
        out.push_back(v);
    }
    return out;
}

enum class LoadingKind { Ones, UniformPerTrial, UniformFixed, Explicit };

struct LoadingSpec {
    LoadingKind kind = LoadingKind::Ones;
    Vector values;  // Explicit only
};

struct TrackerSpec {
    TrackerKind kind;
    TrackerParams params;
    std::string label;  // defaults to the kind name
};

struct BenchConfig {
    ScenarioConfig scenario;   // per-trial seeds are derived from `seed`
    SpikedModelConfig model;   // loading is resolved per trial from `loading`
    LoadingSpec loading;
    std::vector<TrackerSpec> trackers;
    int trials = 1;
    long record_every = 10;
    std::uint64_t seed = 0;
    bool no_timing = false;       // zero the wall_ns column (byte-stable CSV)
    bool debug_checksum = false;  // append a stream checksum column

    void validate() const {
        if (trials < 1) throw InvalidParamsError("bench: trials must be >= 1");
        if (record_every < 1) throw InvalidParamsError("bench: record_every must be >= 1");
        if (trackers.empty()) throw InvalidParamsError("bench: no trackers selected");
        scenario.validate();
        if (loading.kind == LoadingKind::Explicit && loading.values.size() != model.k)
            throw InvalidParamsError("bench: explicit loading size != k");
    }
};

struct BenchResult {
    std::vector<RunRecord> records;
    std::vector<AggregateRecord> aggregates;
};

namespace detail {

inline std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::uint64_t checksum_obs(std::uint64_t h, const PartialObservation& obs) {
    h = fnv1a(h, obs.mask.data(), obs.mask.size());
    h = fnv1a(h, obs.values.data(), sizeof(double) * static_cast<std::size_t>(obs.values.size()));
    return h;
}

inline Vector resolve_loading(const LoadingSpec& spec, int k, RandomStream& trial_rng,
                              std::uint64_t fixed_seed) {
    switch (spec.kind) {
        case LoadingKind::Ones:
            return Vector::Ones(k);
        case LoadingKind::Explicit:
            return spec.values;
        case LoadingKind::UniformPerTrial: {
            Vector c(k);
            for (int i = 0; i < k; ++i) c[i] = trial_rng.uniform01();
            return c;
        }
        case LoadingKind::UniformFixed: {
            RandomStream rng(fixed_seed);
            Vector c(k);
            for (int i = 0; i < k; ++i) c[i] = rng.uniform01();
            return c;
        }
    }
    return Vector::Ones(k);
}

}  // namespace detail

/// One pass per trial: every tracker consumes the identical observation
/// stream from a shared random initialization; metrics are recorded every
/// record_every snapshots against the current ground truth. Trials run on
/// the worker pool; output order is deterministic.
inline BenchResult run_bench(const BenchConfig& cfg) {
    cfg.validate();
    std::vector<std::vector<RunRecord>> per_trial(static_cast<std::size_t>(cfg.trials));

    parallel_for_index(cfg.trials, [&](int trial) {
        const auto t64 = static_cast<std::uint64_t>(trial);
        ScenarioConfig sc = cfg.scenario;
        sc.seed = split_seed(cfg.seed, 2 * t64);
        RandomStream aux(split_seed(cfg.seed, 2 * t64 + 1));

        SpikedModelConfig model = cfg.model;
        model.loading =
            detail::resolve_loading(cfg.loading, model.k, aux, split_seed(cfg.seed, 0x10ADF1ED5EEDULL));
        model.validate();

        Matrix G(model.d, model.k);
        for (int j = 0; j < model.k; ++j)
            for (int i = 0; i < model.d; ++i) G(i, j) = aux.normal();
        const Subspace init = orthonormalize(G);

        std::vector<std::unique_ptr<Tracker>> trackers;
        std::vector<std::int64_t> wall(cfg.trackers.size(), 0);
        trackers.reserve(cfg.trackers.size());
        for (const auto& spec : cfg.trackers)
            trackers.push_back(make_tracker(spec.kind, spec.params, init));

        ScenarioStream stream(sc, model);
        std::uint64_t crc = 0xCBF29CE484222325ULL;
        auto& out = per_trial[static_cast<std::size_t>(trial)];

        for (long n = 1; n <= cfg.scenario.snapshots; ++n) {
            const PartialObservation obs = stream.next();
            if (cfg.debug_checksum) crc = detail::checksum_obs(crc, obs);
            for (std::size_t i = 0; i < trackers.size(); ++i) {
                const auto t0 = std::chrono::steady_clock::now();
                trackers[i]->update(obs);
                const auto t1 = std::chrono::steady_clock::now();
                wall[i] += std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
            }
            if (n % cfg.record_every == 0) {
                const Subspace& truth = stream.truth();
                for (std::size_t i = 0; i < trackers.size(); ++i) {
                    const Subspace est = trackers[i]->estimate();
                    RunRecord rec;
                    rec.tracker = cfg.trackers[i].label.empty() ? tracker_kind_name(cfg.trackers[i].kind)
                                                                : cfg.trackers[i].label;
                    rec.trial = trial;
                    rec.n = n;
                    rec.proj_error = projection_error(est, truth);
                    rec.det_sim = determinant_similarity(est, truth);
                    rec.wall_ns = cfg.no_timing ? 0 : wall[i];
                    rec.stream_crc = crc;
                    out.push_back(std::move(rec));
                }
            }
        }
    });

    BenchResult result;
    for (auto& block : per_trial)
        for (auto& rec : block) result.records.push_back(std::move(rec));

    // aggregate per (tracker, n), trackers in config order, n ascending
    std::map<std::pair<std::string, long>, std::pair<std::vector<double>, std::vector<double>>> cells;
    for (const auto& rec : result.records) {
        auto& cell = cells[{rec.tracker, rec.n}];
        cell.first.push_back(rec.proj_error);
        cell.second.push_back(static_cast<double>(rec.wall_ns));
    }
    std::vector<std::string> order;
    for (const auto& spec : cfg.trackers)
        order.push_back(spec.label.empty() ? tracker_kind_name(spec.kind) : spec.label);
    for (const auto& label : order) {
        for (long n = cfg.record_every; n <= cfg.scenario.snapshots; n += cfg.record_every) {
            auto it = cells.find({label, n});
            if (it == cells.end()) continue;
            const auto qs = aggregate_quantiles(it->second.first, {0.25, 0.5, 0.75});
            const auto wq = aggregate_quantiles(it->second.second, {0.5});
            AggregateRecord agg;
            agg.tracker = label;
            agg.n = n;
            agg.q25 = qs[0];
            agg.median = qs[1];
            agg.q75 = qs[2];
            agg.median_wall_ns = static_cast<std::int64_t>(std::llround(wq[0]));
            result.aggregates.push_back(std::move(agg));
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// CSV output (UTF-8, '.' decimal, %.17g doubles so values round-trip)

namespace detail {

inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records,
                              bool debug_checksum = false) {
    os << "tracker,trial,n,proj_error,det_sim,wall_ns";
    if (debug_checksum) os << ",stream_crc";
    os << "\n";
    for (const auto& r : records) {
        os << r.tracker << ',' << r.trial << ',' << r.n << ',' << detail::fmt_double(r.proj_error)
           << ',' << detail::fmt_double(r.det_sim) << ',' << r.wall_ns;
        if (debug_checksum) os << ',' << r.stream_crc;
        os << "\n";
    }
}

inline void write_aggregates_csv(std::ostream& os, const std::vector<AggregateRecord>& aggs) {
    os << "tracker,n,q25,median,q75,median_wall_ns\n";
    for (const auto& a : aggs) {
        os << a.tracker << ',' << a.n << ',' << detail::fmt_double(a.q25) << ','
           << detail::fmt_double(a.median) << ',' << detail::fmt_double(a.q75) << ','
           << a.median_wall_ns << "\n";
    }
}

}  // namespace substream
