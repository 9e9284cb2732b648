#pragma once

// Von Neumann entropy of finite density matrices and the weighted-ensemble
// (concavity) upper bound.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "entbound/energy_function.hpp"
#include "entbound/errors.hpp"
#include "entbound/linalg.hpp"

namespace entbound {

/// Smallest c with -t log t <= c t^p on [0, inf), and the contact point.
struct EtaBound {
    double c_p = 0.0;
    double t0 = 0.0;
};

inline EtaBound eta_bound_constant(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("eta_bound_constant: p must lie in (0, 1)");
    return {1.0 / ((1.0 - p) * std::exp(1.0)), std::exp(-1.0 / (1.0 - p))};
}

class DensityMatrix {
public:
    static constexpr double kHermitianTol = 1e-12;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kPositivitySlack = 1e-10;

    explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {
        if (m_.rows() == 0 || m_.rows() != m_.cols()) throw DomainError("density matrix must be square and nonempty");
        const double defect = hermitian_defect(m_);
        if (!(defect <= kHermitianTol * std::max(1.0, m_.cwiseAbs().maxCoeff())))
            throw DomainError("density matrix is not Hermitian (defect " + std::to_string(defect) + ")");
        m_ = 0.5 * (m_ + m_.adjoint());
    }

    Eigen::Index dim() const noexcept { return m_.rows(); }
    const CMatrix& matrix() const noexcept { return m_; }
    double trace() const { return m_.trace().real(); }
    bool normalized() const { return std::abs(trace() - 1.0) <= kTraceTol; }

    /// Eigenvalues with [-slack, 0) clamped to 0; anything lower is a positivity error.
    Eigen::VectorXd spectrum() const {
        Eigen::VectorXd mu = hermitian_eigenvalues(m_);
        for (auto& x : mu) {
            if (x < -kPositivitySlack) throw PositivityError("density matrix eigenvalue " + std::to_string(x) + " < 0");
            if (x < 0.0) x = 0.0;
        }
        return mu;
    }

private:
    CMatrix m_;
};

inline double von_neumann_entropy(const DensityMatrix& rho) {
    if (!rho.normalized()) throw DomainError("von_neumann_entropy: trace is not 1");
    double s = 0.0;
    for (double mu : rho.spectrum()) s += eta(mu);
    return s;
}

/// sum lambda_k |v_k><v_k| with unit vectors v_k, kept unnormalized.
class WeightedPureEnsemble {
public:
    static constexpr double kUnitTol = 1e-12;

    explicit WeightedPureEnsemble(Eigen::Index dim) : dim_(dim) {
        if (dim <= 0) throw DomainError("ensemble dimension must be positive");
    }

    void add(double weight, CVector v) {
        if (!(weight >= 0.0) || !std::isfinite(weight)) throw DomainError("ensemble weights must be finite and nonnegative");
        if (v.size() != dim_) throw DomainError("ensemble vector has the wrong dimension");
        if (std::abs(v.norm() - 1.0) > kUnitTol) throw InvariantError("ensemble vector is not a unit vector");
        weights_.push_back(weight);
        vectors_.push_back(std::move(v));
    }

    Eigen::Index dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return weights_.size(); }
    const std::vector<double>& weights() const noexcept { return weights_; }
    const std::vector<CVector>& vectors() const noexcept { return vectors_; }

    double total() const {
        double s = 0.0;
        for (double w : weights_) s += w;
        return s;
    }

private:
    Eigen::Index dim_;
    std::vector<double> weights_;
    std::vector<CVector> vectors_;
};

/// log(total) + (1/total) sum eta(lambda_k).
inline double ensemble_entropy_bound(const WeightedPureEnsemble& ens) {
    const double total = ens.total();
    if (!(total > 0.0)) throw DomainError("ensemble_entropy_bound: total weight is zero");
    double s = 0.0;
    for (double w : ens.weights()) s += eta(w);
    return std::log(total) + s / total;
}

inline DensityMatrix assemble_density(const WeightedPureEnsemble& ens) {
    const double total = ens.total();
    if (ens.size() == 0 || !(total > 0.0)) throw DomainError("assemble_density: total weight is zero");
    CMatrix rho = CMatrix::Zero(ens.dim(), ens.dim());
    for (std::size_t k = 0; k < ens.size(); ++k) {
        if (ens.weights()[k] == 0.0) continue;
        rho.noalias() += ens.weights()[k] * ens.vectors()[k] * ens.vectors()[k].adjoint();
    }
    rho /= total;
    return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

}  // namespace entbound
