#pragma once

// Spiked-model stream generator: x_n = U* a_n + sigma * eps_n observed through
// an i.i.d. Bernoulli(alpha) mask, with static, abrupt-change, and slowly
// rotating ground-truth dynamics.

#include "substream/core.hpp"
#include "substream/rng.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>

namespace substream {

struct SpikedModelConfig {
    int d = 0;
    int k = 0;
    Vector loading;      // diagonal of the signal covariance, entries > 0
    double sigma = 0.0;  // noise level, >= 0
    double alpha = 1.0;  // observation probability, in (0, 1]

    void validate() const {
        if (d < 2 || k < 1 || k >= d) throw InvalidParamsError("spiked model: need 0 < k < d");
        if (loading.size() != k) throw InvalidParamsError("spiked model: loading size != k");
        if ((loading.array() <= 0.0).any())
            throw InvalidParamsError("spiked model: loading entries must be > 0");
        if (sigma < 0.0) throw InvalidParamsError("spiked model: sigma must be >= 0");
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw InvalidParamsError("spiked model: alpha must be in (0, 1]");
    }
};

enum class ScenarioKind { Static, AbruptChange, Rotating };

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::Static;
    long snapshots = 0;
    long change_at = 0;     // AbruptChange: first snapshot drawn from the new subspace
    double delta0 = 0.0;    // Rotating: per-step rotation parameter
    std::uint64_t seed = 0;

    void validate() const {
        if (snapshots < 1) throw InvalidParamsError("scenario: snapshots must be >= 1");
        if (kind == ScenarioKind::AbruptChange &&
            !(change_at > 1 && change_at < snapshots))
            throw InvalidParamsError("scenario: change_at must lie in (1, snapshots)");
        if (kind == ScenarioKind::Rotating && delta0 < 0.0)
            throw InvalidParamsError("scenario: delta0 must be >= 0");
    }
};

/// Orthonormalized i.i.d. Gaussian d-by-k matrix, deterministic in the seed.
inline Subspace make_ground_truth(int d, int k, std::uint64_t seed) {
    if (k < 1 || k >= d) throw InvalidParamsError("make_ground_truth: need 0 < k < d");
    RandomStream rng(seed);
    Matrix G(d, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < d; ++i) G(i, j) = rng.normal();
    return orthonormalize(G);
}

/// One spiked-model snapshot. Draw order: signal coefficients, then noise
/// (only when sigma > 0), then the mask (only when alpha < 1).
inline std::pair<Vector, PartialObservation> next_snapshot(const SpikedModelConfig& cfg,
                                                           const Subspace& U_star,
                                                           RandomStream& rng,
                                                           long snapshot_index = 1) {
    cfg.validate();
    if (U_star.dim() != cfg.d || U_star.rank() != cfg.k)
        throw DimensionMismatchError("next_snapshot: ground truth shape mismatch");
    Vector a(cfg.k);
    for (int j = 0; j < cfg.k; ++j) a[j] = std::sqrt(cfg.loading[j]) * rng.normal();
    Vector x = U_star.basis * a;
    if (cfg.sigma > 0.0)
        for (int i = 0; i < cfg.d; ++i) x[i] += cfg.sigma * rng.normal();
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(cfg.d), 1);
    if (cfg.alpha < 1.0)
        for (int i = 0; i < cfg.d; ++i)
            mask[static_cast<std::size_t>(i)] = rng.bernoulli(cfg.alpha) ? 1 : 0;
    return {x, PartialObservation::from_dense(x, mask, snapshot_index)};
}

namespace detail {

// exp(A) by scaling-and-squaring with a Taylor series run to machine precision.
inline Matrix expm(const Matrix& A) {
    const double nrm = A.norm();
    int squarings = 0;
    double scale = 1.0;
    while (nrm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    Matrix T = scale * A;
    Matrix sum = Matrix::Identity(A.rows(), A.cols());
    Matrix term = sum;
    for (int j = 1; j < 64; ++j) {
        term = (term * T) / static_cast<double>(j);
        sum += term;
        if (term.norm() <= 1e-16 * sum.norm()) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

}  // namespace detail

/// exp(delta0 * B) * U for skew-symmetric B.
inline Subspace rotate_subspace(const Subspace& U, const Matrix& B, double delta0) {
    if (B.rows() != B.cols() || B.rows() != U.dim())
        throw DimensionMismatchError("rotate_subspace: B must be d x d");
    if ((B + B.transpose()).norm() > 1e-12 * std::max(1.0, B.norm()))
        throw NotSkewSymmetricError("rotate_subspace: B is not skew-symmetric");
    if (delta0 == 0.0) return U;
    return Subspace(detail::expm(delta0 * B) * U.basis);
}

/// Skew-symmetric matrix with i.i.d. normal entries, B = (G - G')/2.
inline Matrix sample_skew_symmetric(int d, RandomStream& rng) {
    Matrix G(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) G(i, j) = rng.normal();
    return 0.5 * (G - G.transpose());
}

/// Streams (ground truth, observation) pairs for one scenario. Substreams of
/// the scenario seed: 0 = initial ground truth, 1 = post-change ground truth,
/// 2 = rotation generator, 3 = data draws.
class ScenarioStream {
public:
    ScenarioStream(ScenarioConfig scenario, SpikedModelConfig model)
        : scenario_(scenario),
          model_(std::move(model)),
          data_rng_(split_seed(scenario.seed, 3)) {
        scenario_.validate();
        model_.validate();
        truth_ = make_ground_truth(model_.d, model_.k, split_seed(scenario_.seed, 0));
        if (scenario_.kind == ScenarioKind::AbruptChange)
            post_change_ = make_ground_truth(model_.d, model_.k, split_seed(scenario_.seed, 1));
        if (scenario_.kind == ScenarioKind::Rotating && scenario_.delta0 > 0.0) {
            RandomStream rot_rng(split_seed(scenario_.seed, 2));
            rotation_ = detail::expm(scenario_.delta0 *
                                     sample_skew_symmetric(model_.d, rot_rng));
        }
    }

    bool done() const { return emitted_ >= scenario_.snapshots; }
    long emitted() const { return emitted_; }
    const SpikedModelConfig& model() const { return model_; }

    /// Ground truth for the snapshot most recently returned by next().
    const Subspace& truth() const { return truth_; }

    PartialObservation next() {
        const long n = emitted_ + 1;
        if (n > scenario_.snapshots) throw std::out_of_range("scenario stream exhausted");
        switch (scenario_.kind) {
            case ScenarioKind::Static:
                break;
            case ScenarioKind::AbruptChange:
                if (n == scenario_.change_at) truth_ = post_change_;
                break;
            case ScenarioKind::Rotating:
                if (n > 1 && rotation_.size() > 0)
                    truth_.basis = rotation_ * truth_.basis;
                break;
        }
        auto [x, obs] = next_snapshot(model_, truth_, data_rng_, n);
        emitted_ = n;
        return obs;
    }

private:
    ScenarioConfig scenario_;
    SpikedModelConfig model_;
    RandomStream data_rng_;
    Subspace truth_;
    Subspace post_change_;
    Matrix rotation_;
    long emitted_ = 0;
};

}  // namespace substream
