#pragma once

#include <array>
#include <cstddef>

#include <boost/math/quadrature/gauss.hpp>

namespace entbound::quad {

/// Full N-point Gauss-Legendre rule on [-1, 1] (boost stores only the nonnegative half).
template <std::size_t N>
struct GaussLegendre {
    std::array<double, N> x{};
    std::array<double, N> w{};

    GaussLegendre() {
        using rule = boost::math::quadrature::gauss<double, N>;
        const auto& abs = rule::abscissa();
        const auto& wts = rule::weights();
        std::size_t k = 0;
        const std::size_t half = abs.size();
        for (std::size_t i = half; i-- > 0;) {
            if (abs[i] == 0.0) continue;
            x[k] = -abs[i];
            w[k++] = wts[i];
        }
        for (std::size_t i = 0; i < half; ++i) {
            x[k] = abs[i];
            w[k++] = wts[i];
        }
    }

    /// Integral of fn over [a, b] with one panel.
    template <class F>
    double panel(F&& fn, double a, double b) const {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) s += w[i] * fn(mid + half * x[i]);
        return s * half;
    }
};

inline const GaussLegendre<10>& gl10() {
    static const GaussLegendre<10> rule;
    return rule;
}

}  // namespace entbound::quad
