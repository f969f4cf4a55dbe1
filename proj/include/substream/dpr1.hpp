#pragma once

// Symmetric diagonal-plus-rank-one eigensolver, diag(sigma_sq) + z z'.
// Roots of the secular characteristic equation are isolated by interlacing
// intervals and refined with a bisection-safeguarded Newton iteration.
// Deflation handles zero z components and repeated diagonal entries; the
// Loewner-consistent replacement of z keeps eigenvectors orthogonal to
// machine precision even for clustered roots.

#include "substream/core.hpp"

#include <cmath>
#include <limits>

namespace substream {

struct Dpr1Problem {
    Vector sigma_sq;  // diagonal entries, sorted non-increasing
    Vector z;         // rank-one update vector
};

struct Dpr1Eigen {
    Vector values;   // sorted non-increasing
    Matrix vectors;  // orthonormal columns, aligned with values
};

namespace detail {

// 1 + sum z_i^2 / (d_i - lambda) and its derivative over the active set.
inline void secular_eval(const Vector& d, const Vector& z, double lambda,
                         double& f, double& fp) {
    f = 1.0;
    fp = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        const double del = d[i] - lambda;
        const double t = z[i] / del;
        f += z[i] * t;
        fp += t * t;
    }
}

// One secular root inside (lo, hi); f goes from -inf at lo+ to +inf (or >= 0)
// at hi-. Newton steps are kept inside the shrinking bracket.
inline double secular_root(const Vector& d, const Vector& z, double lo, double hi) {
    const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
    double lambda = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double f, fp;
        secular_eval(d, z, lambda, f, fp);
        if (!std::isfinite(f)) {
            // landed on a pole; resolve by sign of the offending term
            lambda = 0.5 * (lo + hi);
            continue;
        }
        if (f < 0.0)
            lo = lambda;
        else
            hi = lambda;
        double next = lambda - f / fp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - lambda) <= 1e-14 * std::max(std::abs(next), scale) ||
            hi - lo <= 1e-14 * scale) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return lambda;
}

}  // namespace detail

inline Dpr1Eigen dpr1_eigen(const Dpr1Problem& p) {
    const Eigen::Index m = p.sigma_sq.size();
    if (m < 1) throw EmptyInputError("dpr1_eigen: empty problem");
    if (p.z.size() != m) throw DimensionMismatchError("dpr1_eigen: z size mismatch");
    const double dscale = p.sigma_sq.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i + 1 < m; ++i)
        if (p.sigma_sq[i + 1] > p.sigma_sq[i] + 1e-14 * std::max(dscale, 1.0))
            throw InvalidParamsError("dpr1_eigen: sigma_sq must be non-increasing");

    const double znorm = p.z.norm();
    if (znorm == 0.0) {
        return {p.sigma_sq, Matrix::Identity(m, m)};
    }

    // ascending internal order
    Vector d(m), z(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        d[i] = p.sigma_sq[m - 1 - i];
        z[i] = p.z[m - 1 - i];
    }

    const double tol_z = 1e-14 * znorm;
    const double tol_d = 1e-14 * std::max(dscale, znorm * znorm);

    Matrix back = Matrix::Identity(m, m);  // accumulated Givens back-transform
    std::vector<bool> active(static_cast<std::size_t>(m), true);
    for (Eigen::Index i = 0; i < m; ++i)
        if (std::abs(z[i]) <= tol_z) active[static_cast<std::size_t>(i)] = false;

    // rotate repeated diagonal entries so only the last of each cluster keeps
    // a nonzero z component
    for (Eigen::Index i = 0; i < m; ++i) {
        if (!active[static_cast<std::size_t>(i)]) continue;
        for (Eigen::Index j = i + 1; j < m && d[j] - d[i] <= tol_d; ++j) {
            if (!active[static_cast<std::size_t>(j)]) continue;
            const double r = std::hypot(z[i], z[j]);
            const double c = z[j] / r, s = z[i] / r;
            z[j] = r;
            z[i] = 0.0;
            Vector ca = back.col(i), cb = back.col(j);
            back.col(i) = c * ca - s * cb;
            back.col(j) = s * ca + c * cb;
            active[static_cast<std::size_t>(i)] = false;
            break;
        }
    }

    std::vector<Eigen::Index> act;
    for (Eigen::Index i = 0; i < m; ++i)
        if (active[static_cast<std::size_t>(i)]) act.push_back(i);
    const Eigen::Index na = static_cast<Eigen::Index>(act.size());

    Vector values(m);
    Matrix vectors = Matrix::Zero(m, m);
    Eigen::Index col = 0;

    // deflated pairs pass through with their diagonal value
    for (Eigen::Index i = 0; i < m; ++i) {
        if (active[static_cast<std::size_t>(i)]) continue;
        values[col] = d[i];
        vectors.col(col) = back.col(i);
        ++col;
    }

    if (na > 0) {
        Vector da(na), za(na);
        for (Eigen::Index j = 0; j < na; ++j) {
            da[j] = d[act[static_cast<std::size_t>(j)]];
            za[j] = z[act[static_cast<std::size_t>(j)]];
        }
        Vector roots(na);
        if (na == 1) {
            roots[0] = da[0] + za[0] * za[0];
        } else {
            const double ztail = za.squaredNorm();
            for (Eigen::Index j = 0; j < na; ++j) {
                double lo = da[j];
                double hi = (j + 1 < na) ? da[j + 1] : da[na - 1] + ztail;
                double lam = detail::secular_root(da, za, lo, hi);
                // keep strictly inside the open interval so vector formulas stay finite
                lam = std::max(lam, std::nextafter(lo, std::numeric_limits<double>::infinity()));
                if (j + 1 < na)
                    lam = std::min(lam, std::nextafter(hi, -std::numeric_limits<double>::infinity()));
                roots[j] = lam;
            }
        }

        // Loewner-consistent z so that eigenvectors of the solved problem are
        // orthogonal regardless of root conditioning
        Vector zhat(na);
        for (Eigen::Index i = 0; i < na; ++i) {
            double prod = roots[i] - da[i];
            for (Eigen::Index j = 0; j < na; ++j) {
                if (j == i) continue;
                prod *= (roots[j] - da[i]) / (da[j] - da[i]);
            }
            zhat[i] = std::copysign(std::sqrt(std::max(prod, 0.0)), za[i]);
        }

        Vector v(na);
        for (Eigen::Index j = 0; j < na; ++j) {
            for (Eigen::Index i = 0; i < na; ++i) v[i] = zhat[i] / (da[i] - roots[j]);
            v.normalize();
            Vector full = Vector::Zero(m);
            for (Eigen::Index i = 0; i < na; ++i) full[act[static_cast<std::size_t>(i)]] = v[i];
            values[col] = roots[j];
            vectors.col(col) = back * full;
            ++col;
        }
    }

    // emit non-increasing
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return values[a] > values[b]; });
    Dpr1Eigen out;
    out.values.resize(m);
    out.vectors.resize(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        out.values[i] = values[order[static_cast<std::size_t>(i)]];
        // rows flip back from the ascending internal order to the caller's order
        out.vectors.col(i) = vectors.col(order[static_cast<std::size_t>(i)]).reverse();
    }
    return out;
}

}  // namespace substream
