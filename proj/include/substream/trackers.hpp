#pragma once

// Streaming subspace trackers behind one interface: ingest one observation,
// update state in O(d k^2) or better, expose the current subspace estimate.
//
// Algebraic family: exact incremental SVD (full data) and its missing-data
// variants (MD-ISVD, Brand, PIMC), Oja, Krasulina. Geometric family: GROUSE,
// PAST, PETRELS.

#include "substream/core.hpp"
#include "substream/dpr1.hpp"

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace substream {

/// Residuals at or below this level take the zero-residual branch.
inline bool negligible_residual(double r_norm, double x_norm) {
    return r_norm <= 1e-12 * std::max(x_norm, 1.0);
}

/// Step size sequence: constant eta, or c/n decay.
class StepSchedule {
public:
    static StepSchedule constant(double eta) { return StepSchedule(eta, false); }
    static StepSchedule decay(double c) { return StepSchedule(c, true); }

    double at(long n) const { return decay_ ? value_ / static_cast<double>(n) : value_; }
    bool is_decay() const { return decay_; }
    double value() const { return value_; }

private:
    StepSchedule(double v, bool dec) : value_(v), decay_(dec) {}
    double value_;
    bool decay_;
};

class Tracker {
public:
    virtual ~Tracker() = default;

    /// Consume one observation. Single-pass: nothing beyond internal state is
    /// retained, and only the observation passed here is ever read.
    virtual void update(const PartialObservation& obs) = 0;

    virtual Subspace estimate() const = 0;
    virtual void reset(const Subspace& init) = 0;
    virtual std::string_view name() const = 0;

    /// Updates dropped because the masked system was rank deficient.
    long skipped() const { return skipped_; }

protected:
    long skipped_ = 0;
};

namespace detail {

// Symmetric orthogonalization; applied only when roundoff drift is detected
// or a ridge fallback produced a residual that is not exactly orthogonal.
inline void polar_correct(Matrix& U) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(U.transpose() * U);
    U = U * es.eigenvectors() *
        es.eigenvalues().cwiseMax(1e-30).cwiseSqrt().cwiseInverse().asDiagonal() *
        es.eigenvectors().transpose();
}

inline void enforce_orthonormal(Matrix& U) {
    const Eigen::Index k = U.cols();
    if ((U.transpose() * U - Matrix::Identity(k, k)).norm() > 1e-11) polar_correct(U);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Exact incremental SVD (full data only). The factor grows one rank per
// residual-bearing snapshot; the estimate is the top-k block.

class IsvdTracker final : public Tracker {
public:
    IsvdTracker(const Subspace& init, int k) : k_(k) { reset(init); }

    void update(const PartialObservation& obs) override {
        if (!obs.is_full())
            throw InvalidParamsError("isvd: requires fully observed snapshots");
        const Vector x = obs.values;
        const double xn = x.norm();
        if (factor_.U.cols() == 0) {
            if (xn == 0.0) return;  // defer initialization past zero vectors
            factor_.U = x / xn;
            factor_.S = Vector::Constant(1, xn);
            factor_.V = Matrix::Constant(1, 1, 1.0);
            return;
        }
        const Eigen::Index m = factor_.U.cols();
        const Vector w = factor_.U.transpose() * x;
        const Vector r = x - factor_.U * w;
        const double rn = r.norm();
        if (!negligible_residual(rn, xn) && m < factor_.U.rows()) {
            Dpr1Problem prob;
            prob.sigma_sq = Vector::Zero(m + 1);
            prob.sigma_sq.head(m) = factor_.S.cwiseAbs2();
            prob.z.resize(m + 1);
            prob.z.head(m) = w;
            prob.z[m] = rn;
            const Dpr1Eigen eig = dpr1_eigen(prob);
            Matrix K = Matrix::Zero(m + 1, m + 1);
            K.topLeftCorner(m, m) = factor_.S.asDiagonal();
            K.topRightCorner(m, 1) = w;
            K(m, m) = rn;
            Matrix Ug(factor_.U.rows(), m + 1);
            Ug.leftCols(m) = factor_.U;
            Ug.col(m) = r / rn;
            factor_.U = Ug * eig.vectors;
            factor_.S = eig.values.cwiseMax(0.0).cwiseSqrt();
            Matrix Vhat = K.transpose() * eig.vectors;
            for (Eigen::Index j = 0; j < Vhat.cols(); ++j) Vhat.col(j).normalize();
            Matrix Vg = Matrix::Zero(factor_.V.rows() + 1, m + 1);
            Vg.topLeftCorner(factor_.V.rows(), m) = factor_.V;
            Vg(factor_.V.rows(), m) = 1.0;
            factor_.V = Vg * Vhat;
        } else {
            Dpr1Problem prob;
            prob.sigma_sq = factor_.S.cwiseAbs2();
            prob.z = w;
            const Dpr1Eigen eig = dpr1_eigen(prob);
            Matrix K(m, m + 1);
            K.leftCols(m) = Matrix(factor_.S.asDiagonal());
            K.col(m) = w;
            factor_.U = factor_.U * eig.vectors;
            factor_.S = eig.values.cwiseMax(0.0).cwiseSqrt();
            Matrix Vhat = K.transpose() * eig.vectors;  // (m+1) x m
            for (Eigen::Index j = 0; j < Vhat.cols(); ++j) Vhat.col(j).normalize();
            Matrix Vg = Matrix::Zero(factor_.V.rows() + 1, m + 1);
            Vg.topLeftCorner(factor_.V.rows(), m) = factor_.V;
            Vg(factor_.V.rows(), m) = 1.0;
            factor_.V = Vg * Vhat;
        }
    }

    Subspace estimate() const override {
        const Eigen::Index m = factor_.U.cols();
        if (m >= k_) return Subspace(factor_.U.leftCols(k_));
        // not enough data yet: pad with init columns orthogonalized against
        // the factor
        Matrix A(init_.basis.rows(), m + init_.basis.cols());
        if (m > 0) A.leftCols(m) = factor_.U;
        A.rightCols(init_.basis.cols()) = init_.basis;
        Eigen::HouseholderQR<Matrix> qr(A);
        Matrix Q = qr.householderQ() * Matrix::Identity(A.rows(), k_);
        return Subspace(std::move(Q));
    }

    void reset(const Subspace& init) override {
        if (!(k_ >= 1 && k_ < init.dim()) || init.rank() < k_)
            throw InvalidParamsError("isvd: need init with rank >= k and 0 < k < d");
        init_ = init;
        factor_ = SvdFactor{};
        factor_.U.resize(init.dim(), 0);
        factor_.has_v = true;
        skipped_ = 0;
    }

    const SvdFactor& factor() const { return factor_; }
    std::string_view name() const override { return "isvd"; }

private:
    int k_;
    Subspace init_;
    SvdFactor factor_;
};

// ---------------------------------------------------------------------------
// Missing-data ISVD family. The variants differ only in how the carried
// singular values are weighted before the rank-(k+1) refactorization.

enum class IsvdVariant { MdIsvd, Brand, Pimc };

class MdIsvdTracker final : public Tracker {
public:
    MdIsvdTracker(const Subspace& init, IsvdVariant variant, double discount,
                  double gamma0, std::optional<double> ridge)
        : variant_(variant), discount_(discount), gamma0_(gamma0), ridge_(ridge) {
        if (variant == IsvdVariant::Brand && !(discount > 0.0 && discount <= 1.0))
            throw InvalidParamsError("brand: discount must be in (0, 1]");
        if (gamma0 <= 0.0) throw InvalidParamsError("pimc: gamma0 must be > 0");
        reset(init);
    }

    void update(const PartialObservation& obs) override {
        if (obs.dim() != U_.rows()) throw DimensionMismatchError("md-isvd: dimension mismatch");
        Vector w;
        try {
            w = masked_ls_weights(U_, obs, ridge_.value_or(0.0));
        } catch (const RankDeficientError&) {
            ++skipped_;
            return;
        }
        const Eigen::Index k = U_.cols();
        const Vector p = U_ * w;
        const Vector r = masked_residual(obs, p);
        const double rn = r.norm();
        const double xn = obs.values.norm();

        Vector gamma;
        double gamma_next = gamma_;
        switch (variant_) {
            case IsvdVariant::MdIsvd:
                gamma = S_;
                break;
            case IsvdVariant::Brand:
                gamma = discount_ * S_;
                break;
            case IsvdVariant::Pimc: {
                gamma_next = std::sqrt(gamma_ * gamma_ + xn * xn);
                const double sf = S_.norm();
                gamma = (sf == 0.0) ? Vector(Vector::Zero(k)) : Vector((gamma_next / sf) * S_);
                break;
            }
        }

        if (!negligible_residual(rn, xn)) {
            Matrix K = Matrix::Zero(k + 1, k + 1);
            K.topLeftCorner(k, k) = gamma.asDiagonal();
            K.topRightCorner(k, 1) = w;
            K(k, k) = rn;
            Eigen::JacobiSVD<Matrix> svd(K, Eigen::ComputeFullU);
            Matrix Ug(U_.rows(), k + 1);
            Ug.leftCols(k) = U_;
            Ug.col(k) = r / rn;
            U_ = Ug * svd.matrixU().leftCols(k);
            S_ = svd.singularValues().head(k);
        } else {
            Matrix K(k, k + 1);
            K.leftCols(k) = Matrix(gamma.asDiagonal());
            K.col(k) = w;
            Eigen::JacobiSVD<Matrix> svd(K, Eigen::ComputeFullU);
            U_ = U_ * svd.matrixU();
            S_ = svd.singularValues().head(k);
        }
        gamma_ = gamma_next;
        detail::enforce_orthonormal(U_);
    }

    Subspace estimate() const override { return Subspace(U_); }

    void reset(const Subspace& init) override {
        U_ = init.basis;
        S_ = Vector::Zero(init.rank());
        gamma_ = gamma0_;
        skipped_ = 0;
    }

    const Vector& singular_values() const { return S_; }
    double pimc_gamma() const { return gamma_; }
    std::string_view name() const override {
        switch (variant_) {
            case IsvdVariant::MdIsvd: return "md-isvd";
            case IsvdVariant::Brand: return "brand";
            default: return "pimc";
        }
    }

private:
    IsvdVariant variant_;
    double discount_;
    double gamma0_;
    std::optional<double> ridge_;
    Matrix U_;
    Vector S_;
    double gamma_ = 1.0;
};

// ---------------------------------------------------------------------------
// Oja's rule with missing data: interpolate unobserved coordinates from the
// current model, rank-one update, re-orthogonalize.

class OjaTracker final : public Tracker {
public:
    OjaTracker(const Subspace& init, StepSchedule step, std::optional<double> ridge)
        : step_(step), ridge_(ridge) {
        reset(init);
    }

    void update(const PartialObservation& obs) override {
        if (obs.dim() != U_.rows()) throw DimensionMismatchError("oja: dimension mismatch");
        Vector w;
        try {
            w = masked_ls_weights(U_, obs, ridge_.value_or(0.0));
        } catch (const RankDeficientError&) {
            ++skipped_;
            return;
        }
        const Vector p = U_ * w;
        const Vector x_tilde = p + masked_residual(obs, p);  // observed: x, else p
        const double eta = step_.at(++n_);
        Matrix W = U_ + eta * x_tilde * w.transpose();
        try {
            U_ = orthonormalize(W).basis;
        } catch (const RankDeficientError&) {
            ++skipped_;  // degenerate step collapsed the basis; keep previous state
        }
    }

    Subspace estimate() const override { return Subspace(U_); }

    void reset(const Subspace& init) override {
        U_ = init.basis;
        n_ = 0;
        skipped_ = 0;
    }

    std::string_view name() const override { return "oja"; }

private:
    StepSchedule step_;
    std::optional<double> ridge_;
    Matrix U_;
    long n_ = 0;
};

// ---------------------------------------------------------------------------
// Krasulina's rank-one iteration (full data), kept in raw un-normalized form.

class KrasulinaTracker final : public Tracker {
public:
    KrasulinaTracker(const Subspace& init, StepSchedule step) : step_(step) {
        if (init.rank() != 1) throw InvalidParamsError("krasulina: rank-1 only");
        reset(init);
    }

    void update(const PartialObservation& obs) override {
        if (!obs.is_full())
            throw InvalidParamsError("krasulina: requires fully observed snapshots");
        const Vector& x = obs.values;
        const double c = x.dot(u_);
        const double quot = (c * c) / u_.squaredNorm();
        u_ += step_.at(++n_) * (c * x - quot * u_);
    }

    Subspace estimate() const override {
        const double nrm = u_.norm();
        if (nrm == 0.0) throw ZeroVectorError("krasulina: estimate collapsed to zero");
        return Subspace(Matrix(u_ / nrm));
    }

    void reset(const Subspace& init) override {
        u_ = init.basis.col(0);
        n_ = 0;
        skipped_ = 0;
    }

    const Vector& raw() const { return u_; }
    std::string_view name() const override { return "krasulina"; }

private:
    StepSchedule step_;
    Vector u_;
    long n_ = 0;
};

// ---------------------------------------------------------------------------
// GROUSE: Grassmannian rank-one gradient update. Without a step schedule the
// greedy step theta = arctan(||r|| / ||p||) is used.

class GrouseTracker final : public Tracker {
public:
    GrouseTracker(const Subspace& init, std::optional<StepSchedule> step,
                  std::optional<double> ridge)
        : step_(step), ridge_(ridge) {
        reset(init);
    }

    void update(const PartialObservation& obs) override {
        if (obs.dim() != U_.rows()) throw DimensionMismatchError("grouse: dimension mismatch");
        Vector w;
        try {
            w = masked_ls_weights(U_, obs, ridge_.value_or(0.0));
        } catch (const RankDeficientError&) {
            ++skipped_;
            return;
        }
        ++n_;
        const double wn = w.norm();
        const Vector p = U_ * w;
        const Vector r = masked_residual(obs, p);
        const double rn = r.norm();
        const double xn = obs.values.norm();
        if (wn == 0.0 || negligible_residual(rn, xn)) return;  // theta = 0
        const double pn = p.norm();
        const double theta = step_ ? step_->at(n_) * rn * pn : std::atan2(rn, pn);
        U_ += ((std::cos(theta) - 1.0) / pn * p + std::sin(theta) / rn * r) *
              (w.transpose() / wn);
        detail::enforce_orthonormal(U_);
    }

    Subspace estimate() const override { return Subspace(U_); }

    void reset(const Subspace& init) override {
        U_ = init.basis;
        n_ = 0;
        skipped_ = 0;
    }

    std::string_view name() const override { return "grouse"; }

private:
    std::optional<StepSchedule> step_;
    std::optional<double> ridge_;
    Matrix U_;
    long n_ = 0;
};

// ---------------------------------------------------------------------------
// PAST: projection-approximation subspace tracking via RLS (full data).

class PastTracker final : public Tracker {
public:
    PastTracker(const Subspace& init, double discount, double delta)
        : discount_(discount), delta_(delta) {
        if (!(discount > 0.0 && discount <= 1.0))
            throw InvalidParamsError("past: discount must be in (0, 1]");
        if (delta <= 0.0) throw InvalidParamsError("past: delta must be > 0");
        reset(init);
    }

    void update(const PartialObservation& obs) override {
        if (!obs.is_full())
            throw InvalidParamsError("past: requires fully observed snapshots");
        const Vector& x = obs.values;
        const Vector w = U_.transpose() * x;
        const Vector Rw = R_ * w;
        const double beta = 1.0 + w.dot(Rw) / discount_;
        const Vector v = Rw / discount_;
        R_ = R_ / discount_ - (v * v.transpose()) / beta;
        R_ = (0.5 * (R_ + R_.transpose())).eval();
        const Vector gain = R_ * w;
        U_ += (x - U_ * w) * gain.transpose();
    }

    Subspace estimate() const override { return orthonormalize(U_); }

    void reset(const Subspace& init) override {
        U_ = init.basis;
        R_ = delta_ * Matrix::Identity(init.rank(), init.rank());
        skipped_ = 0;
    }

    const Matrix& raw_factor() const { return U_; }
    const Matrix& gain_matrix() const { return R_; }
    std::string_view name() const override { return "past"; }

private:
    double discount_;
    double delta_;
    Matrix U_;
    Matrix R_;
};

// ---------------------------------------------------------------------------
// PETRELS: parallel per-row RLS with discounting; unobserved rows keep their
// coefficients and only rescale their inverse Grammians.

class PetrelsTracker final : public Tracker {
public:
    PetrelsTracker(const Subspace& init, double discount, double delta,
                   std::optional<double> ridge)
        : discount_(discount), delta_(delta), ridge_(ridge) {
        if (!(discount > 0.0 && discount <= 1.0))
            throw InvalidParamsError("petrels: discount must be in (0, 1]");
        if (delta <= 0.0) throw InvalidParamsError("petrels: delta must be > 0");
        reset(init);
    }

    void update(const PartialObservation& obs) override {
        const Eigen::Index d = U_.rows(), k = U_.cols();
        if (obs.dim() != d) throw DimensionMismatchError("petrels: dimension mismatch");
        Vector w;
        try {
            w = masked_ls_weights(U_, obs, ridge_.value_or(0.0));
        } catch (const RankDeficientError&) {
            ++skipped_;
            return;
        }
        if (k == 1) {
            update_rank1(obs, w[0]);
            renormalize_scale();
            return;
        }
        const double inv_l = 1.0 / discount_;
        std::vector<std::uint8_t> observed(static_cast<std::size_t>(d), 0);
        Vector xd = Vector::Zero(d);
        for (std::size_t j = 0; j < obs.indices.size(); ++j) {
            observed[static_cast<std::size_t>(obs.indices[j])] = 1;
            xd[obs.indices[j]] = obs.values[static_cast<Eigen::Index>(j)];
        }
        for (Eigen::Index i = 0; i < d; ++i) {
            auto R = R_.block(i * k, 0, k, k);
            if (!observed[static_cast<std::size_t>(i)]) {
                R *= inv_l;
                continue;
            }
            const Vector v = inv_l * (R * w);
            const double beta = 1.0 + w.dot(v);
            R = inv_l * R - (v * v.transpose()) / beta;
            R = (0.5 * (R + R.transpose())).eval();
            const double err = xd[i] - w.dot(U_.row(i));
            U_.row(i) += (err / beta) * v.transpose();
        }
        renormalize_scale();
    }

    Subspace estimate() const override { return orthonormalize(U_); }

    void reset(const Subspace& init) override {
        U_ = init.basis;
        const Eigen::Index d = U_.rows(), k = U_.cols();
        R_.resize(d * k, k);
        for (Eigen::Index i = 0; i < d; ++i)
            R_.block(i * k, 0, k, k) = delta_ * Matrix::Identity(k, k);
        skipped_ = 0;
    }

    const Matrix& raw_factor() const { return U_; }
    /// Inverse-Grammian block of row i.
    Matrix row_gain(Eigen::Index i) const {
        const Eigen::Index k = U_.cols();
        return R_.block(i * k, 0, k, k);
    }
    /// Average of the per-row inverse Grammians (k = 1 only).
    double mean_gain() const {
        if (U_.cols() != 1) throw InvalidParamsError("mean_gain: defined for k = 1");
        return R_.col(0).mean();
    }
    std::string_view name() const override { return "petrels"; }

private:
    // The overall scale of the factor is a neutral direction of the per-row
    // least-squares fit: (U, R) and (U/c, R/c^2) generate identical weights,
    // gains, and estimates from here on. The scale random-walks under heavy
    // discounting, so pull it back to O(1) once it leaves a wide window.
    void renormalize_scale() {
        const double mean_col_energy = U_.squaredNorm() / static_cast<double>(U_.cols());
        if (mean_col_energy > 1e12 || (mean_col_energy > 0.0 && mean_col_energy < 1e-12)) {
            U_ /= std::sqrt(mean_col_energy);
            R_ /= mean_col_energy;
        }
    }

    void update_rank1(const PartialObservation& obs, double w) {
        const Eigen::Index d = U_.rows();
        const double inv_l = 1.0 / discount_;
        auto R = R_.col(0).array();
        auto u = U_.col(0).array();
        Eigen::ArrayXd v = inv_l * w * R;
        Eigen::ArrayXd beta = 1.0 + w * v;
        Eigen::ArrayXd mask = Eigen::ArrayXd::Zero(d);
        Eigen::ArrayXd x = Eigen::ArrayXd::Zero(d);
        for (std::size_t j = 0; j < obs.indices.size(); ++j) {
            mask[obs.indices[j]] = 1.0;
            x[obs.indices[j]] = obs.values[static_cast<Eigen::Index>(j)];
        }
        R = inv_l * R - mask * v.square() / beta;
        u += mask * (x - w * u) * v / beta;
    }

    double discount_;
    double delta_;
    std::optional<double> ridge_;
    Matrix U_;
    Matrix R_;  // d*k rows of k-by-k blocks (column vector of scalars when k = 1)
};

// ---------------------------------------------------------------------------
// Factory

enum class TrackerKind { Isvd, MdIsvd, Brand, Pimc, Oja, Krasulina, Grouse, Past, Petrels };

inline TrackerKind parse_tracker_kind(std::string_view s) {
    if (s == "isvd") return TrackerKind::Isvd;
    if (s == "md-isvd") return TrackerKind::MdIsvd;
    if (s == "brand") return TrackerKind::Brand;
    if (s == "pimc") return TrackerKind::Pimc;
    if (s == "oja") return TrackerKind::Oja;
    if (s == "krasulina") return TrackerKind::Krasulina;
    if (s == "grouse") return TrackerKind::Grouse;
    if (s == "past") return TrackerKind::Past;
    if (s == "petrels") return TrackerKind::Petrels;
    throw UnknownTrackerError("unknown tracker: " + std::string(s));
}

inline std::string tracker_kind_name(TrackerKind k) {
    switch (k) {
        case TrackerKind::Isvd: return "isvd";
        case TrackerKind::MdIsvd: return "md-isvd";
        case TrackerKind::Brand: return "brand";
        case TrackerKind::Pimc: return "pimc";
        case TrackerKind::Oja: return "oja";
        case TrackerKind::Krasulina: return "krasulina";
        case TrackerKind::Grouse: return "grouse";
        case TrackerKind::Past: return "past";
        case TrackerKind::Petrels: return "petrels";
    }
    return "?";
}

struct TrackerParams {
    double discount = 0.98;           // brand, past, petrels
    double delta = 1.0;               // past, petrels initialization scale
    std::optional<double> step;       // constant step (oja default 0.5; grouse: greedy if unset)
    std::optional<double> step_decay; // eta_n = step_decay / n, overrides `step`
    std::optional<double> ridge;      // masked LS fallback instead of skipping
    double pimc_gamma0 = 1.0;
};

inline std::unique_ptr<Tracker> make_tracker(TrackerKind kind, const TrackerParams& params,
                                             const Subspace& init) {
    if (!init.is_orthonormal())
        throw InvalidParamsError("make_tracker: init subspace is not orthonormal");
    if (params.ridge && *params.ridge < 0.0)
        throw InvalidParamsError("make_tracker: ridge must be >= 0");
    if (params.step && *params.step <= 0.0)
        throw InvalidParamsError("make_tracker: step must be > 0");
    if (params.step_decay && *params.step_decay <= 0.0)
        throw InvalidParamsError("make_tracker: step_decay must be > 0");
    const auto schedule = [&](double fallback) {
        if (params.step_decay) return StepSchedule::decay(*params.step_decay);
        return StepSchedule::constant(params.step.value_or(fallback));
    };
    switch (kind) {
        case TrackerKind::Isvd:
            return std::make_unique<IsvdTracker>(init, static_cast<int>(init.rank()));
        case TrackerKind::MdIsvd:
            return std::make_unique<MdIsvdTracker>(init, IsvdVariant::MdIsvd, 1.0,
                                                   params.pimc_gamma0, params.ridge);
        case TrackerKind::Brand:
            return std::make_unique<MdIsvdTracker>(init, IsvdVariant::Brand, params.discount,
                                                   params.pimc_gamma0, params.ridge);
        case TrackerKind::Pimc:
            return std::make_unique<MdIsvdTracker>(init, IsvdVariant::Pimc, 1.0,
                                                   params.pimc_gamma0, params.ridge);
        case TrackerKind::Oja:
            return std::make_unique<OjaTracker>(init, schedule(0.5), params.ridge);
        case TrackerKind::Krasulina:
            return std::make_unique<KrasulinaTracker>(init, schedule(0.5));
        case TrackerKind::Grouse: {
            std::optional<StepSchedule> step;
            if (params.step_decay)
                step = StepSchedule::decay(*params.step_decay);
            else if (params.step)
                step = StepSchedule::constant(*params.step);
            return std::make_unique<GrouseTracker>(init, step, params.ridge);
        }
        case TrackerKind::Past:
            return std::make_unique<PastTracker>(init, params.discount, params.delta);
        case TrackerKind::Petrels:
            return std::make_unique<PetrelsTracker>(init, params.discount, params.delta,
                                                    params.ridge);
    }
    throw UnknownTrackerError("make_tracker: unhandled kind");
}

}  // namespace substream
