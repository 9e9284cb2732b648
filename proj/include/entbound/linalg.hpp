#pragma once

// Small dense complex linear algebra: cyclic Jacobi for Hermitian matrices and
// seeded random matrices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "entbound/errors.hpp"

namespace entbound {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct HermitianEigen {
    Eigen::VectorXd values;  ///< ascending
    CMatrix vectors;         ///< columns
    int sweeps = 0;
    double off_norm = 0.0;   ///< off-diagonal Frobenius norm at exit
};

/// max |A - A^H| entrywise.
inline double hermitian_defect(const CMatrix& a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline double off_diagonal_norm(const CMatrix& a) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

/// Cyclic Jacobi. Each rotation first removes the phase of a_pq with
/// diag(1, e^{-i phi}) and then zeroes the now real pair with a plane rotation.
inline HermitianEigen jacobi_eigen(CMatrix a, double rel_tol = 1e-13, int max_sweeps = 100, bool want_vectors = true) {
    const Eigen::Index n = a.rows();
    if (n != a.cols()) throw DomainError("jacobi_eigen: matrix is not square");
    HermitianEigen out;
    if (want_vectors) out.vectors = CMatrix::Identity(n, n);
    const double scale = a.norm();
    const double target = rel_tol * std::max(scale, std::numeric_limits<double>::min());

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        out.off_norm = off_diagonal_norm(a);
        if (out.off_norm <= target) break;
        ++out.sweeps;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0) continue;
                const cplx phase = a(p, q) / mag;  // e^{i phi}
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // J on (p,q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                const cplx jpp = c, jpq = s;
                const cplx jqp = -s * std::conj(phase), jqq = c * std::conj(phase);
                for (Eigen::Index k = 0; k < n; ++k) {  // A <- A J
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {  // A <- J^H A
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                if (want_vectors) {
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const cplx vkp = out.vectors(k, p), vkq = out.vectors(k, q);
                        out.vectors(k, p) = vkp * jpp + vkq * jqp;
                        out.vectors(k, q) = vkp * jpq + vkq * jqq;
                    }
                }
            }
        }
    }
    out.off_norm = off_diagonal_norm(a);
    if (out.off_norm > target) throw ConstructionError("Jacobi sweeps did not converge", out.off_norm);

    std::vector<Eigen::Index> order(n);
    for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i).real() < a(j, j).real(); });
    out.values.resize(n);
    CMatrix sorted(want_vectors ? n : 0, want_vectors ? n : 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i) = a(order[i], order[i]).real();
        if (want_vectors) sorted.col(i) = out.vectors.col(order[i]);
    }
    if (want_vectors) out.vectors = std::move(sorted);
    return out;
}

inline Eigen::VectorXd hermitian_eigenvalues(const CMatrix& a) { return jacobi_eigen(a, 1e-13, 100, false).values; }

// ---------------------------------------------------------------------------
// seeded randomness; every draw is a pure function of the seed

/// Independent standard complex Gaussian entries (real and imaginary parts N(0, 1/2)).
inline CMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cplx(normal(rng), normal(rng));
    return m;
}

inline CMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_gaussian(rows, cols, rng);
}

/// Haar-distributed unitary from the QR factors of a Gaussian matrix.
inline CMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
    Eigen::HouseholderQR<CMatrix> qr(random_gaussian(n, n, rng));
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double m = std::abs(r(i, i));
        if (m > 0.0) q.col(i) *= r(i, i) / m;
    }
    return q;
}

inline CVector random_unit_vector(Eigen::Index n, std::mt19937_64& rng) {
    CVector v = random_gaussian(n, 1, rng);
    return v / v.norm();
}

/// G G^H / Tr, full rank with probability one.
inline CMatrix random_density(Eigen::Index n, std::mt19937_64& rng, Eigen::Index rank = -1) {
    const CMatrix g = random_gaussian(n, rank > 0 ? rank : n, rng);
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

}  // namespace entbound
