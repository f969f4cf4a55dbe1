#pragma once

// Subspace primitives shared by every tracker: orthonormalization, masked
// least squares, residuals, similarity metrics, and a batch-PCA oracle.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace substream {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Errors

struct RankDeficientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ZeroVectorError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DegenerateGapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotSkewSymmetricError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct UnknownTrackerError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvalidParamsError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ZeroNoiseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct EmptyInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Domain types

/// A d-by-k matrix with orthonormal columns, 0 < k < d.
struct Subspace {
    Matrix basis;

    Subspace() = default;
    explicit Subspace(Matrix b) : basis(std::move(b)) {}

    Eigen::Index dim() const { return basis.rows(); }
    Eigen::Index rank() const { return basis.cols(); }

    /// Frobenius deviation of basis'*basis from the identity.
    double orthonormality_defect() const {
        const Eigen::Index k = basis.cols();
        return (basis.transpose() * basis - Matrix::Identity(k, k)).norm();
    }

    bool is_orthonormal(double tol = 1e-10) const {
        return basis.allFinite() && orthonormality_defect() < tol;
    }
};

/// Observed entries of one data snapshot plus its boolean mask.
struct PartialObservation {
    std::vector<std::uint8_t> mask;  // length d, 1 = observed
    Vector values;                   // one entry per observed coordinate
    std::vector<int> indices;        // observed coordinates, ascending
    long snapshot_index = 1;

    int dim() const { return static_cast<int>(mask.size()); }
    int observed_count() const { return static_cast<int>(indices.size()); }
    bool is_full() const { return observed_count() == dim(); }

    static PartialObservation from_dense(const Vector& x,
                                         const std::vector<std::uint8_t>& mask,
                                         long snapshot_index = 1) {
        if (static_cast<Eigen::Index>(mask.size()) != x.size())
            throw DimensionMismatchError("mask length does not match vector length");
        PartialObservation obs;
        obs.mask = mask;
        obs.snapshot_index = snapshot_index;
        for (int i = 0; i < x.size(); ++i)
            if (mask[static_cast<std::size_t>(i)]) obs.indices.push_back(i);
        obs.values.resize(static_cast<Eigen::Index>(obs.indices.size()));
        for (std::size_t j = 0; j < obs.indices.size(); ++j)
            obs.values[static_cast<Eigen::Index>(j)] = x[obs.indices[j]];
        return obs;
    }

    static PartialObservation full(const Vector& x, long snapshot_index = 1) {
        PartialObservation obs;
        obs.mask.assign(static_cast<std::size_t>(x.size()), 1);
        obs.values = x;
        obs.indices.resize(static_cast<std::size_t>(x.size()));
        for (int i = 0; i < x.size(); ++i) obs.indices[static_cast<std::size_t>(i)] = i;
        obs.snapshot_index = snapshot_index;
        return obs;
    }

    /// Dense vector with zeros at unobserved coordinates.
    Vector to_dense() const {
        Vector x = Vector::Zero(dim());
        for (std::size_t j = 0; j < indices.size(); ++j)
            x[indices[j]] = values[static_cast<Eigen::Index>(j)];
        return x;
    }

    /// Rows of M at the observed coordinates, stacked in index order.
    Matrix gather_rows(const Matrix& M) const {
        Matrix out(static_cast<Eigen::Index>(indices.size()), M.cols());
        for (std::size_t j = 0; j < indices.size(); ++j)
            out.row(static_cast<Eigen::Index>(j)) = M.row(indices[j]);
        return out;
    }
};

/// Thin SVD factor. V is maintained only by the exact full-data ISVD.
struct SvdFactor {
    Matrix U;           // d x m, orthonormal columns
    Vector S;           // m, non-negative, non-increasing
    Matrix V;           // optional right factor (cols x m); empty if not tracked
    bool has_v = false;
};

// ---------------------------------------------------------------------------
// Operations

/// QR-based orthonormalization with a deterministic sign convention
/// (non-negative diagonal of the triangular factor).
inline Subspace orthonormalize(const Matrix& M) {
    if (M.rows() < M.cols() || M.cols() < 1)
        throw DimensionMismatchError("orthonormalize: need a tall matrix");
    Eigen::HouseholderQR<Matrix> qr(M);
    Matrix R = qr.matrixQR().topRows(M.cols()).template triangularView<Eigen::Upper>();
    {
        // rank check on the triangular factor
        Eigen::JacobiSVD<Matrix> svd(R);
        const auto& sv = svd.singularValues();
        if (sv(0) <= 0.0 || sv(sv.size() - 1) <= 1e-12 * sv(0))
            throw RankDeficientError("orthonormalize: matrix is rank deficient");
    }
    Matrix Q = qr.householderQ() * Matrix::Identity(M.rows(), M.cols());
    for (Eigen::Index j = 0; j < M.cols(); ++j)
        if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
    return Subspace(std::move(Q));
}

/// Minimizer of ||P_Omega(x - U w)||^2 (+ ridge ||w||^2 when ridge > 0),
/// solved through an orthogonal factorization of the masked row block.
inline Vector masked_ls_weights(const Matrix& U, const PartialObservation& obs,
                                double ridge = 0.0) {
    if (obs.dim() != U.rows())
        throw DimensionMismatchError("masked_ls_weights: observation dimension mismatch");
    if (ridge < 0.0) throw InvalidParamsError("masked_ls_weights: ridge must be >= 0");
    const Eigen::Index k = U.cols();
    const Eigen::Index m = obs.observed_count();
    if (ridge == 0.0) {
        if (m < k) throw RankDeficientError("masked_ls_weights: fewer observed rows than rank");
        Matrix Uo = obs.gather_rows(U);
        Eigen::ColPivHouseholderQR<Matrix> qr(Uo);
        const Matrix& QR = qr.matrixQR();
        const double rmax = std::abs(QR(0, 0));
        if (rmax == 0.0 || std::abs(QR(k - 1, k - 1)) <= 1e-12 * rmax)
            throw RankDeficientError("masked_ls_weights: masked rows are rank deficient");
        return qr.solve(obs.values);
    }
    // ridge > 0: augmented rows keep the solve in factored form
    Matrix A(m + k, k);
    Vector b = Vector::Zero(m + k);
    A.topRows(m) = obs.gather_rows(U);
    A.bottomRows(k) = std::sqrt(ridge) * Matrix::Identity(k, k);
    b.head(m) = obs.values;
    return A.householderQr().solve(b);
}

inline Vector masked_ls_weights(const Subspace& U, const PartialObservation& obs,
                                double ridge = 0.0) {
    return masked_ls_weights(U.basis, obs, ridge);
}

/// r(i) = x(i) - p(i) on observed coordinates, zero elsewhere.
inline Vector masked_residual(const PartialObservation& obs, const Vector& p) {
    if (p.size() != obs.dim())
        throw DimensionMismatchError("masked_residual: dimension mismatch");
    Vector r = Vector::Zero(obs.dim());
    for (std::size_t j = 0; j < obs.indices.size(); ++j) {
        const int i = obs.indices[j];
        r[i] = obs.values[static_cast<Eigen::Index>(j)] - p[i];
    }
    return r;
}

inline double cosine_similarity(const Vector& u, const Vector& u_star) {
    if (u.size() != u_star.size())
        throw DimensionMismatchError("cosine_similarity: dimension mismatch");
    const double nu = u.norm();
    const double nv = u_star.norm();
    if (nu == 0.0 || nv == 0.0) throw ZeroVectorError("cosine_similarity: zero vector");
    return std::clamp(u.dot(u_star) / (nu * nv), -1.0, 1.0);
}

/// det(U*' U U' U*) for orthonormal inputs; 1 iff the subspaces coincide.
inline double determinant_similarity(const Subspace& U, const Subspace& U_star) {
    if (U.dim() != U_star.dim() || U.rank() != U_star.rank())
        throw DimensionMismatchError("determinant_similarity: shape mismatch");
    Matrix M = U_star.basis.transpose() * U.basis;  // k x k
    const double det = M.determinant();
    return std::clamp(det * det, 0.0, 1.0);
}

/// ||(I - U_hat U_hat') U*||_F^2, in [0, k].
inline double projection_error(const Subspace& U_hat, const Subspace& U_star) {
    if (U_hat.dim() != U_star.dim() || U_hat.rank() != U_star.rank())
        throw DimensionMismatchError("projection_error: shape mismatch");
    const double k = static_cast<double>(U_star.rank());
    const double overlap = (U_hat.basis.transpose() * U_star.basis).squaredNorm();
    return std::clamp(k - overlap, 0.0, k);
}

/// Frobenius distance between the orthogonal projectors of two subspaces.
/// Sign- and rotation-invariant subspace comparison used throughout the tests.
inline double projector_distance(const Subspace& A, const Subspace& B) {
    return (A.basis * A.basis.transpose() - B.basis * B.basis.transpose()).norm();
}

/// Top-k left singular subspace of X.
inline Subspace batch_pca(const Matrix& X, int k) {
    const Eigen::Index d = X.rows(), n = X.cols();
    if (k < 1 || k > std::min(d, n))
        throw InvalidParamsError("batch_pca: k out of range");
    Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinU);
    const Vector& sv = svd.singularValues();
    const double next = (k < std::min(d, n)) ? sv(k) : 0.0;
    if (sv(k - 1) - next <= 1e-12 * std::max(sv(0), 1.0))
        throw DegenerateGapError("batch_pca: sigma_k == sigma_{k+1}, subspace not unique");
    Matrix U = svd.matrixU().leftCols(k);
    // deterministic sign: largest-magnitude entry of each column made positive
    for (Eigen::Index j = 0; j < k; ++j) {
        Eigen::Index imax = 0;
        U.col(j).cwiseAbs().maxCoeff(&imax);
        if (U(imax, j) < 0.0) U.col(j) = -U.col(j);
    }
    return Subspace(std::move(U));
}

}  // namespace substream
