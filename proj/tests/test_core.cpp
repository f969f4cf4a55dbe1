#include "substream/core.hpp"
#include "substream/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace substream;

namespace {

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
    RandomStream rng(seed);
    Matrix M(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) M(i, j) = rng.normal();
    return M;
}

// test-only oracle: modified Gram-Schmidt, independent of the QR path
Matrix gram_schmidt(Matrix M) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        for (Eigen::Index i = 0; i < j; ++i) M.col(j) -= M.col(i).dot(M.col(j)) * M.col(i);
        M.col(j).normalize();
    }
    return M;
}

// test-only oracle: top-k subspace via plain subspace iteration on X X'
Subspace power_iteration_pca(const Matrix& X, int k, int iters = 600) {
    const Matrix S = X * X.transpose();
    Matrix Q = random_matrix(static_cast<int>(X.rows()), k, 999);
    Q = gram_schmidt(Q);
    for (int it = 0; it < iters; ++it) Q = gram_schmidt(S * Q);
    return Subspace(Q);
}

}  // namespace

TEST_CASE("orthonormalize keeps already-orthonormal input") {
    Matrix M = Matrix::Identity(3, 2);
    const Subspace U = orthonormalize(M);
    REQUIRE((U.basis - M).norm() < 1e-14);
}

TEST_CASE("orthonormalize removes column scaling") {
    Matrix M(3, 2);
    M << 2, 0, 0, 3, 0, 0;
    const Subspace U = orthonormalize(M);
    Matrix expect(3, 2);
    expect << 1, 0, 0, 1, 0, 0;
    REQUIRE((U.basis - expect).norm() < 1e-14);
}

TEST_CASE("orthonormalize matches Gram-Schmidt projector") {
    const Matrix M = random_matrix(5, 2, 11);
    const Subspace U = orthonormalize(M);
    const Matrix G = gram_schmidt(M);
    REQUIRE((U.basis * U.basis.transpose() - G * G.transpose()).norm() < 1e-10);
    REQUIRE(U.is_orthonormal());
}

TEST_CASE("orthonormalize rejects rank-deficient input") {
    Matrix M(4, 2);
    M.col(0) = Vector::Ones(4);
    M.col(1) = 2.0 * Vector::Ones(4);
    REQUIRE_THROWS_AS(orthonormalize(M), RankDeficientError);
}

TEST_CASE("masked least squares: single active row") {
    Matrix U = Matrix::Zero(3, 1);
    U(0, 0) = 1.0;
    std::vector<std::uint8_t> mask = {1, 0, 1};
    Vector x(3);
    x << 5, 0, 0;
    const auto obs = PartialObservation::from_dense(x, mask);
    const Vector w = masked_ls_weights(U, obs);
    REQUIRE(w.size() == 1);
    REQUIRE(w[0] == Catch::Approx(5.0).margin(1e-12));
}

TEST_CASE("masked least squares: full mask collapses to U'x") {
    const Subspace U = orthonormalize(random_matrix(8, 3, 21));
    const Vector x = random_matrix(8, 1, 22);
    const auto obs = PartialObservation::full(x);
    const Vector w = masked_ls_weights(U, obs);
    REQUIRE((w - U.basis.transpose() * x).norm() < 1e-12);
}

TEST_CASE("masked least squares matches dense pseudoinverse") {
    const Subspace U = orthonormalize(random_matrix(8, 3, 31));
    const Vector x = random_matrix(8, 1, 32);
    std::vector<std::uint8_t> mask = {1, 0, 1, 1, 0, 0, 1, 1};
    const auto obs = PartialObservation::from_dense(x, mask);
    const Vector w = masked_ls_weights(U, obs);

    const Matrix Uo = obs.gather_rows(U.basis);
    const Vector oracle = Uo.completeOrthogonalDecomposition().pseudoInverse() * obs.values;
    REQUIRE((w - oracle).norm() < 1e-10);
}

TEST_CASE("masked least squares: rank deficiency and ridge fallback") {
    const Subspace U = orthonormalize(random_matrix(6, 3, 41));
    Vector x = random_matrix(6, 1, 42);
    std::vector<std::uint8_t> mask = {1, 1, 0, 0, 0, 0};  // 2 rows < k = 3
    const auto obs = PartialObservation::from_dense(x, mask);
    REQUIRE_THROWS_AS(masked_ls_weights(U, obs), RankDeficientError);
    const Vector w = masked_ls_weights(U, obs, 1e-6);
    REQUIRE(w.allFinite());
    // ridge solution minimizes the augmented normal equations
    const Matrix Uo = obs.gather_rows(U.basis);
    const Vector oracle =
        (Uo.transpose() * Uo + 1e-6 * Matrix::Identity(3, 3)).ldlt().solve(Uo.transpose() * obs.values);
    REQUIRE((w - oracle).norm() < 1e-10);
}

TEST_CASE("masked residual") {
    SECTION("full mask, exact prediction") {
        Vector x(3);
        x << 1, 2, 3;
        const auto obs = PartialObservation::full(x);
        REQUIRE(masked_residual(obs, x).norm() == 0.0);
    }
    SECTION("empty mask") {
        Vector x = Vector::Zero(3);
        std::vector<std::uint8_t> mask = {0, 0, 0};
        const auto obs = PartialObservation::from_dense(x, mask);
        Vector p(3);
        p << 4, 5, 6;
        REQUIRE(masked_residual(obs, p).norm() == 0.0);
    }
    SECTION("single observed coordinate") {
        Vector x(3);
        x << 0, 4, 0;
        std::vector<std::uint8_t> mask = {0, 1, 0};
        const auto obs = PartialObservation::from_dense(x, mask);
        Vector p(3);
        p << 9, 1, 9;
        const Vector r = masked_residual(obs, p);
        REQUIRE(r[0] == 0.0);
        REQUIRE(r[1] == Catch::Approx(3.0));
        REQUIRE(r[2] == 0.0);
    }
}

TEST_CASE("cosine similarity") {
    Vector u(2), v(2);
    u << 1, 0;
    v << 1, 0;
    REQUIRE(cosine_similarity(u, v) == Catch::Approx(1.0));
    v << 0, 1;
    REQUIRE(cosine_similarity(u, v) == Catch::Approx(0.0).margin(1e-15));
    Vector w(2);
    w << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    REQUIRE(cosine_similarity(w, u) == Catch::Approx(1.0 / std::sqrt(2.0)));
    REQUIRE_THROWS_AS(cosine_similarity(Vector::Zero(2), u), ZeroVectorError);
}

TEST_CASE("determinant similarity basics") {
    const Subspace U = orthonormalize(random_matrix(6, 2, 51));
    REQUIRE(determinant_similarity(U, U) == Catch::Approx(1.0));

    Matrix A = Matrix::Zero(4, 1), B = Matrix::Zero(4, 1);
    A(0, 0) = 1.0;
    B(1, 0) = 1.0;
    REQUIRE(determinant_similarity(Subspace(A), Subspace(B)) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("determinant similarity equals squared cosine for k = 1") {
    const Subspace u = orthonormalize(random_matrix(7, 1, 61));
    const Subspace v = orthonormalize(random_matrix(7, 1, 62));
    const double c = cosine_similarity(u.basis.col(0), v.basis.col(0));
    REQUIRE(determinant_similarity(u, v) == Catch::Approx(c * c).margin(1e-12));
}

TEST_CASE("determinant similarity is rotation invariant") {
    const Subspace U = orthonormalize(random_matrix(9, 3, 71));
    const Subspace V = orthonormalize(random_matrix(9, 3, 72));
    const Matrix Q = orthonormalize(random_matrix(3, 3, 73)).basis;
    const Matrix R = orthonormalize(random_matrix(3, 3, 74)).basis;
    const double base = determinant_similarity(U, V);
    const double rotated =
        determinant_similarity(Subspace(Matrix(U.basis * Q)), Subspace(Matrix(V.basis * R)));
    REQUIRE(rotated == Catch::Approx(base).margin(1e-12));
}

TEST_CASE("projection error basics") {
    const Subspace U = orthonormalize(random_matrix(6, 2, 81));
    REQUIRE(projection_error(U, U) == Catch::Approx(0.0).margin(1e-12));

    Matrix A = Matrix::Zero(4, 2), B = Matrix::Zero(4, 2);
    A(0, 0) = 1.0;
    A(1, 1) = 1.0;
    B(2, 0) = 1.0;
    B(3, 1) = 1.0;
    REQUIRE(projection_error(Subspace(A), Subspace(B)) == Catch::Approx(2.0));
}

TEST_CASE("projection error matches dense projector oracle and is symmetric") {
    const Subspace U = orthonormalize(random_matrix(10, 3, 91));
    const Subspace V = orthonormalize(random_matrix(10, 3, 92));
    const Matrix P = Matrix::Identity(10, 10) - U.basis * U.basis.transpose();
    const double oracle = (P * V.basis).squaredNorm();
    REQUIRE(projection_error(U, V) == Catch::Approx(oracle).margin(1e-10));
    REQUIRE(projection_error(U, V) == Catch::Approx(projection_error(V, U)).margin(1e-12));
}

TEST_CASE("batch pca on rank-one data") {
    Vector e1 = Vector::Zero(4);
    e1[0] = 1.0;
    Matrix X = e1 * Eigen::RowVector3d::Ones();
    const Subspace U = batch_pca(X, 1);
    REQUIRE((U.basis.col(0) - e1).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("batch pca picks the two largest of scaled orthogonal columns") {
    Matrix X = Matrix::Zero(5, 3);
    X(0, 0) = 3.0;
    X(1, 1) = 2.0;
    X(2, 2) = 1.0;
    const Subspace U = batch_pca(X, 2);
    Matrix expect = Matrix::Zero(5, 2);
    expect(0, 0) = 1.0;
    expect(1, 1) = 1.0;
    REQUIRE(projector_distance(U, Subspace(expect)) < 1e-12);
}

TEST_CASE("batch pca matches power iteration oracle") {
    const Matrix X = random_matrix(10, 20, 101);
    const Subspace U = batch_pca(X, 3);
    const Subspace P = power_iteration_pca(X, 3);
    REQUIRE(projection_error(U, P) < 1e-8);
}

TEST_CASE("batch pca rejects degenerate spectral gap") {
    Matrix X = Matrix::Zero(4, 2);
    X(0, 0) = 1.0;
    X(1, 1) = 1.0;  // sigma_1 == sigma_2
    REQUIRE_THROWS_AS(batch_pca(X, 1), DegenerateGapError);
}
