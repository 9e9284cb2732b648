#pragma once

// Independent reference computations. Nothing here calls into the library's
// numerical code paths.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <Eigen/Dense>

namespace oracle {

/// Partitions of n with all parts in [min_part, max_part], by plain recursion.
inline std::uint64_t count_partitions(int n, int max_part, int min_part = 1) {
    if (n == 0) return 1;
    std::uint64_t total = 0;
    for (int part = std::min(n, max_part); part >= min_part; --part) total += count_partitions(n - part, part, min_part);
    return total;
}

inline std::uint64_t partitions(int n) { return count_partitions(n, n); }
inline std::uint64_t partitions_without_ones(int n) { return n == 0 ? 1 : count_partitions(n, n, 2); }

/// Composite 20-point Gauss-Legendre over [a, b] with the given panel count.
inline double integrate(const std::function<double(double)>& fn, double a, double b, int panels) {
    using rule = boost::math::quadrature::gauss<double, 20>;
    const double h = (b - a) / panels;
    double s = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double lo = a + k * h;
        s += rule::integrate(fn, lo, lo + h);
    }
    return s;
}

/// f(t) = int_0^1 ghat(tau) (1/2)(1 - int_0^{t tau} J0(y) dy) dtau, using
/// (1/pi) int_0^{pi/2} cos(x / cos s) ds = (1/2)(1 - int_0^x J0).
class BesselEnergy {
public:
    explicit BesselEnergy(double alpha) : rho_((1.0 + alpha) / (1.0 - alpha)) {
        norm_ = integrate([this](double tau) { return shape(tau); }, 0.0, 1.0, 200);
    }

    double bump(double tau) const { return shape(tau) / norm_; }

    double operator()(double t) const {
        t = std::abs(t);
        auto inner = [&](double tau) {
            const double x = t * tau;
            if (x == 0.0) return 0.5 * bump(tau);
            const int panels = std::max(2, static_cast<int>(std::ceil(x / 2.0)));
            const double j0 = integrate([](double y) { return std::cyl_bessel_j(0.0, y); }, 0.0, x, panels);
            return bump(tau) * 0.5 * (1.0 - j0);
        };
        return integrate(inner, 0.0, 1.0, 200);
    }

private:
    double shape(double tau) const {
        if (tau <= 0.0 || tau >= 1.0) return 0.0;
        return std::exp(1.0 - std::pow(4.0 * tau * (1.0 - tau), -rho_));
    }
    double rho_;
    double norm_ = 1.0;
};

/// prod_{n >= start} (1 - q^n)^{-1}, q = e^{-beta}.
inline double euler_product(double beta, int start = 1) {
    const double q = std::exp(-beta);
    double logp = 0.0;
    for (int n = start; n < 200000; ++n) {
        const double qn = std::pow(q, n);
        if (qn < 1e-19) break;
        logp -= std::log1p(-qn);
    }
    return std::exp(logp);
}

inline Eigen::VectorXd eigenvalues(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline double entropy(const Eigen::MatrixXcd& rho) {
    double s = 0.0;
    for (double mu : eigenvalues(rho))
        if (mu > 0.0) s -= mu * std::log(mu);
    return s;
}

inline Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues();
}

}  // namespace oracle
