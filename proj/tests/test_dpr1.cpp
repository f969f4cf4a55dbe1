#include "substream/dpr1.hpp"
#include "substream/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace substream;

namespace {

// dense oracle for diag(sigma_sq) + z z'
Dpr1Eigen dense_oracle(const Dpr1Problem& p) {
    const Eigen::Index m = p.sigma_sq.size();
    Matrix A = Matrix(p.sigma_sq.asDiagonal()) + p.z * p.z.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    Dpr1Eigen out;
    out.values = es.eigenvalues().reverse();
    out.vectors.resize(m, m);
    for (Eigen::Index j = 0; j < m; ++j) out.vectors.col(j) = es.eigenvectors().col(m - 1 - j);
    return out;
}

Dpr1Problem random_problem(RandomStream& rng, int max_m = 12) {
    const int m = 1 + static_cast<int>(rng.bits() % static_cast<std::uint64_t>(max_m));
    Vector d(m), z(m);
    for (int i = 0; i < m; ++i) d[i] = 4.0 * rng.uniform01();
    // inject exact repeats and zero z entries to exercise deflation
    for (int i = 0; i < m; ++i)
        if (rng.uniform01() < 0.25 && i > 0) d[i] = d[i - 1];
    std::sort(d.data(), d.data() + m, std::greater<double>());
    for (int i = 0; i < m; ++i) z[i] = (rng.uniform01() < 0.2) ? 0.0 : rng.normal();
    return {d, z};
}

void check_interlacing(const Dpr1Problem& p, const Vector& lambda, double tol) {
    const Eigen::Index m = lambda.size();
    for (Eigen::Index i = 0; i < m; ++i) {
        REQUIRE(lambda[i] >= p.sigma_sq[i] - tol);
        if (i > 0) REQUIRE(lambda[i] <= p.sigma_sq[i - 1] + tol);
    }
    REQUIRE(lambda[0] <= p.sigma_sq[0] + p.z.squaredNorm() + tol);
}

}  // namespace

TEST_CASE("dpr1: zero update vector deflates completely") {
    Dpr1Problem p;
    p.sigma_sq = Vector(3);
    p.sigma_sq << 3, 2, 1;
    p.z = Vector::Zero(3);
    const Dpr1Eigen e = dpr1_eigen(p);
    REQUIRE((e.values - p.sigma_sq).norm() == 0.0);
    REQUIRE((e.vectors - Matrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("dpr1: scalar case") {
    Dpr1Problem p;
    p.sigma_sq = Vector::Constant(1, 1.0);
    p.z = Vector::Constant(1, 2.0);
    const Dpr1Eigen e = dpr1_eigen(p);
    REQUIRE(e.values[0] == Catch::Approx(5.0).epsilon(1e-14));
    REQUIRE(std::abs(e.vectors(0, 0)) == Catch::Approx(1.0));
}

TEST_CASE("dpr1: random problem matches dense eigensolver") {
    RandomStream rng(2024);
    Dpr1Problem p;
    p.sigma_sq = Vector(4);
    p.sigma_sq << 2.5, 1.5, 0.7, 0.1;
    p.z = Vector(4);
    for (int i = 0; i < 4; ++i) p.z[i] = rng.normal();
    const Dpr1Eigen mine = dpr1_eigen(p);
    const Dpr1Eigen oracle = dense_oracle(p);
    REQUIRE((mine.values - oracle.values).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE((mine.vectors * mine.vectors.transpose() - oracle.vectors * oracle.vectors.transpose())
                .norm() < 1e-8);
}

TEST_CASE("dpr1: property sweep with deflation cases") {
    RandomStream rng(77);
    for (int trial = 0; trial < 120; ++trial) {
        const Dpr1Problem p = random_problem(rng);
        const Dpr1Eigen e = dpr1_eigen(p);
        const Dpr1Eigen oracle = dense_oracle(p);
        const double scale = std::max(1.0, p.sigma_sq.cwiseAbs().maxCoeff() + p.z.squaredNorm());

        REQUIRE((e.values - oracle.values).cwiseAbs().maxCoeff() < 1e-10 * scale);

        // orthonormal eigenvectors
        const Eigen::Index m = e.values.size();
        REQUIRE((e.vectors.transpose() * e.vectors - Matrix::Identity(m, m)).norm() < 1e-10);

        // each pair actually solves the eigenproblem
        const Matrix A = Matrix(p.sigma_sq.asDiagonal()) + p.z * p.z.transpose();
        REQUIRE((A * e.vectors - e.vectors * e.values.asDiagonal()).norm() < 1e-9 * scale);

        check_interlacing(p, e.values, 1e-10 * scale);

        const double trace_lhs = e.values.sum();
        const double trace_rhs = p.sigma_sq.sum() + p.z.squaredNorm();
        REQUIRE(trace_lhs == Catch::Approx(trace_rhs).epsilon(1e-10).margin(1e-12));
    }
}

TEST_CASE("dpr1: rejects unsorted diagonal") {
    Dpr1Problem p;
    p.sigma_sq = Vector(2);
    p.sigma_sq << 1.0, 2.0;
    p.z = Vector::Ones(2);
    REQUIRE_THROWS_AS(dpr1_eigen(p), InvalidParamsError);
}
