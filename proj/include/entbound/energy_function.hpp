#pragma once

// The energy function f: R -> R with f(0) = 1/2 and almost-exponential decay.
//
//   ghat(tau) = Z^{-1} exp(-(4 tau (1 - tau))^{-rho})   on (0, 1), zero elsewhere
//   g(u)      = int_0^1 ghat(tau) e^{i u tau} dtau        (g(0) = 1)
//   f(t)      = (2 pi)^{-1} int_0^pi Re g(t / cos s) ds
//
// ghat is symmetric about tau = 1/2, so g(u) = e^{iu/2} psi(u) with
// psi(u) = int ghat(1/2 + sigma) cos(u sigma) dsigma real, even and band-limited
// to [-1/2, 1/2]. psi is tabulated once on piecewise Chebyshev panels; the
// s-integral is folded onto [0, pi/2] and mapped by s = gd(v) (1/cos s = cosh v):
//
//   f(t) = pi^{-1} int_0^inf cos(t cosh v / 2) psi(t cosh v) sech v dv
//
// which has no endpoint singularity. The tau-quadrature uses panels of width at
// most 2 pi / (panels_per_oscillation |u|); outer panels in v span at most pi in
// the argument u = t cosh v.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "entbound/errors.hpp"
#include "entbound/quadrature.hpp"

namespace entbound {

inline constexpr double kPi = 3.14159265358979323846;

/// eta(x) = -x log x with eta(0) = 0.
inline double eta(double x) { return x > 0.0 ? -x * std::log(x) : 0.0; }

struct QuadratureConfig {
    double panels_per_oscillation = 4.0;  ///< panel width <= 2 pi / (this * |u|)
    double tolerance = 1e-10;             ///< absolute tolerance on f
    double t_max = 200.0;                 ///< T0: beyond it f is replaced by the envelope
    double grid_step = 0.25;              ///< certification grid spacing on [0, T0]
};

/// K exp(-c |t|^beta), dominating |f| on the certification grid.
struct Envelope {
    double K = 0.5;
    double c = 0.0;
    double beta = 1.0;
    double operator()(double t) const { return K * std::exp(-c * std::pow(std::abs(t), beta)); }
    double log_at(double t) const { return std::log(K) - c * std::pow(std::abs(t), beta); }
};

struct FValue {
    double value = 0.0;
    bool is_envelope = false;  ///< value is the envelope overestimate of |f|, not f itself
};

class EnergyFunction {
public:
    static EnergyFunction build(double alpha, QuadratureConfig cfg = {}) {
        if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
        if (!(cfg.t_max > 0.0) || !(cfg.grid_step > 0.0) || !(cfg.panels_per_oscillation >= 1.0) ||
            !(cfg.tolerance > 0.0))
            throw DomainError("invalid quadrature configuration");
        EnergyFunction ef;
        ef.alpha_ = alpha;
        ef.rho_ = (1.0 + alpha) / (1.0 - alpha);
        ef.cfg_ = cfg;
        ef.cache_ = std::make_shared<Cache>();
        ef.build_psi_table();
        ef.certify();
        return ef;
    }

    double alpha() const noexcept { return alpha_; }
    double rho() const noexcept { return rho_; }
    /// Gevrey decay exponent rho/(rho+1) = (1+alpha)/2 of g.
    double decay_exponent() const noexcept { return rho_ / (rho_ + 1.0); }
    const QuadratureConfig& config() const noexcept { return cfg_; }
    double t_max() const noexcept { return cfg_.t_max; }
    /// psi is treated as zero past this argument.
    double u_max() const noexcept { return u_max_; }

    double sup_f() const noexcept { return sup_f_; }
    /// sup_t eta(|f(t)|/2).
    double sup_eta() const noexcept { return sup_eta_; }
    /// sup_t |f(t) log|f(t)||, the literal reading of the S_E supremum.
    double sup_f_log_f() const noexcept { return sup_f_log_f_; }
    /// max over the grid of |f(t)| exp(|t|^alpha).
    double weighted_sup() const noexcept { return weighted_sup_; }
    const Envelope& envelope() const noexcept { return envelope_; }
    /// Worst interpolation/quadrature residual seen while building.
    double quadrature_residual() const noexcept { return residual_; }
    const std::vector<double>& grid_t() const noexcept { return grid_t_; }
    const std::vector<double>& grid_f() const noexcept { return grid_f_; }

    /// Normalized Fourier-side bump; integrates to 1 over (0, 1).
    double bump(double tau) const {
        if (!(tau > 0.0 && tau < 1.0)) return 0.0;
        return std::exp(log_bump_shape(tau - 0.5)) / norm_;
    }

    /// psi(u) from the Chebyshev table; Re g(u) = cos(u/2) psi(u).
    double psi(double u) const {
        u = std::abs(u);
        if (u >= u_max_) return 0.0;
        const std::size_t idx = std::min(static_cast<std::size_t>(u / kTableWidth), table_.size() - 1);
        const double a = idx * kTableWidth;
        const double x = 2.0 * (u - a) / kTableWidth - 1.0;
        return clenshaw(table_[idx], x);
    }

    double g_real(double u) const { return std::cos(0.5 * u) * psi(u); }

    /// psi(u) by direct tau-quadrature (slow; used for table construction and checks).
    double psi_direct(double u) const {
        double s = 0.0;
        for (std::size_t i = 0; i < sigma_.size(); ++i) s += weight_[i] * std::cos(u * sigma_[i]);
        return s;
    }

    /// f(t) by quadrature for |t| <= T0, otherwise the envelope overestimate.
    FValue eval(double t) const {
        if (std::isnan(t)) throw DomainError("eval_f: NaN argument");
        const double at = std::abs(t);
        if (at > cfg_.t_max) return {envelope_(at), true};
        return {quadrature_f(at), false};
    }

    /// f_delta(t) = f(delta t).
    FValue eval_delta(double delta, double t) const {
        if (!(delta > 0.0)) throw DomainError("eval_f_delta: delta must be positive");
        return eval(delta * t);
    }

    /// Memoized f_delta(n) at integer arguments, as used by spectral sums.
    FValue at(double delta, long n) const {
        if (!(delta > 0.0)) throw DomainError("eval_f_delta: delta must be positive");
        std::uint64_t bits;
        std::memcpy(&bits, &delta, sizeof bits);
        const auto key = std::make_pair(bits, n);
        {
            std::shared_lock lock(cache_->mutex);
            auto it = cache_->values.find(key);
            if (it != cache_->values.end()) return it->second;
        }
        const FValue v = eval(delta * static_cast<double>(n));
        std::unique_lock lock(cache_->mutex);
        return cache_->values.emplace(key, v).first->second;
    }

    /// max |f(t)| exp(|t|^alpha) over a grid of the given step on [0, T0].
    double weighted_sup_on_grid(double step) const {
        double best = 0.0;
        for (double t : grid(step)) best = std::max(best, std::abs(quadrature_f(t)) * std::exp(std::pow(t, alpha_)));
        return best;
    }

private:
    static constexpr double kTableWidth = 4.0;
    static constexpr std::size_t kTableDegree = 20;
    static constexpr double kPsiFloor = 1e-14;
    // cos(u/2) psi(u) has frequencies in [0, 1]: half its shortest period per outer panel
    static constexpr double kOuterPanel = kPi;

    struct Cache {
        std::shared_mutex mutex;
        std::map<std::pair<std::uint64_t, long>, FValue> values;
    };

    EnergyFunction() = default;

    // log of the unnormalized bump at tau = 1/2 + sigma, scaled to peak 0.
    double log_bump_shape(double sigma) const {
        const double q = 1.0 - 4.0 * sigma * sigma;
        if (q <= 0.0) return -std::numeric_limits<double>::infinity();
        return 1.0 - std::pow(q, -rho_);
    }

    std::vector<double> grid(double step) const {
        std::vector<double> ts;
        const auto n = static_cast<std::size_t>(std::floor(cfg_.t_max / step + 1e-9));
        for (std::size_t j = 0; j <= n; ++j) ts.push_back(j * step);
        if (ts.back() < cfg_.t_max) ts.push_back(cfg_.t_max);
        return ts;
    }

    // composite 10-point rule on sigma in [0, 1/2] resolving cos(u sigma) for u <= u_cap
    void build_sigma_grid(double u_cap) {
        const double width = 2.0 * kPi / (cfg_.panels_per_oscillation * std::max(u_cap, 1.0));
        const auto panels = static_cast<std::size_t>(std::ceil(0.5 / width));
        const auto& rule = quad::gl10();
        sigma_.clear();
        weight_.clear();
        double total = 0.0;
        for (std::size_t p = 0; p < panels; ++p) {
            const double a = 0.5 * p / panels, b = 0.5 * (p + 1) / panels;
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (std::size_t i = 0; i < rule.x.size(); ++i) {
                const double s = mid + half * rule.x[i];
                const double w = 2.0 * half * rule.w[i] * std::exp(log_bump_shape(s));
                if (w == 0.0) continue;
                sigma_.push_back(s);
                weight_.push_back(w);
                total += w;
            }
        }
        // normalize so psi(0) = g(0) = 1
        for (double& w : weight_) w /= total;
        norm_ = total;
    }

    static std::vector<double> chebyshev_coefficients(const std::vector<double>& values) {
        const std::size_t n = values.size();
        std::vector<double> c(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += values[j] * std::cos(kPi * k * (j + 0.5) / n);
            c[k] = 2.0 * s / n;
        }
        c[0] *= 0.5;
        return c;
    }

    static double clenshaw(const std::vector<double>& c, double x) {
        double b1 = 0.0, b2 = 0.0;
        for (std::size_t k = c.size(); k-- > 1;) {
            const double b0 = 2.0 * x * b1 - b2 + c[k];
            b2 = b1;
            b1 = b0;
        }
        return x * b1 - b2 + c[0];
    }

    void build_psi_table() {
        const std::size_t n = kTableDegree + 1;
        double u_cap = std::max(4.0 * cfg_.t_max, 64.0);
        for (;;) {
            build_sigma_grid(u_cap);
            table_.clear();
            residual_ = 0.0;
            const auto panels = static_cast<std::size_t>(std::ceil(u_cap / kTableWidth));
            double tail_max = 0.0;
            for (std::size_t p = 0; p < panels; ++p) {
                const double a = p * kTableWidth;
                std::vector<double> values(n);
                for (std::size_t j = 0; j < n; ++j) {
                    const double x = std::cos(kPi * (j + 0.5) / n);
                    values[j] = psi_direct(a + 0.5 * kTableWidth * (x + 1.0));
                }
                table_.push_back(chebyshev_coefficients(values));
                // off-node check at the panel quarter points
                for (double frac : {0.25, 0.75}) {
                    const double u = a + frac * kTableWidth;
                    const double r = std::abs(clenshaw(table_.back(), 2.0 * frac - 1.0) - psi_direct(u));
                    residual_ = std::max(residual_, r);
                }
                if (p + 16 >= panels)
                    for (double v : values) tail_max = std::max(tail_max, std::abs(v));
            }
            u_max_ = panels * kTableWidth;
            if (residual_ > cfg_.tolerance)
                throw ConstructionError("psi table interpolation did not converge", residual_);
            if (tail_max < kPsiFloor) break;
            u_cap *= 2.0;
            if (u_cap > 1e5) throw ConstructionError("psi does not decay within u <= 1e5", tail_max);
        }
        // tau-quadrature convergence: compare against a grid twice as fine at the far end
        const std::vector<double> coarse_sigma = sigma_, coarse_weight = weight_;
        const double coarse_norm = norm_;
        const double probe = 0.5 * u_max_;
        const double coarse_val = psi_direct(probe);
        const double coarse_mid = psi_direct(0.25 * u_max_);
        cfg_.panels_per_oscillation *= 2.0;
        build_sigma_grid(u_max_);
        const double fine_val = psi_direct(probe), fine_mid = psi_direct(0.25 * u_max_);
        cfg_.panels_per_oscillation *= 0.5;
        sigma_ = coarse_sigma;
        weight_ = coarse_weight;
        norm_ = coarse_norm;
        residual_ = std::max({residual_, std::abs(fine_val - coarse_val), std::abs(fine_mid - coarse_mid)});
        if (residual_ > cfg_.tolerance)
            throw ConstructionError("tau quadrature did not converge", residual_);
    }

    double quadrature_f(double t) const {
        const auto& rule = quad::gl10();
        const double du = kOuterPanel;
        constexpr double kMaxV = 40.0;  // sech(40) < 1e-17
        const double v_end = t > 0.0 ? std::min(kMaxV, std::acosh(std::max(1.0, u_max_ / t))) : kMaxV;
        auto integrand = [t, this](double v) {
            const double u = t * std::cosh(v);
            return std::cos(0.5 * u) * psi(u) / std::cosh(v);
        };
        double sum = 0.0;
        double v = 0.0;
        while (v < v_end) {
            double next = v + 0.5;
            if (t > 0.0) next = std::min(next, std::acosh((t * std::cosh(v) + du) / t));
            next = std::min(next, v_end);
            sum += rule.panel(integrand, v, next);
            v = next;
        }
        return sum / kPi;
    }

    void certify() {
        const double f0 = quadrature_f(0.0);
        residual_ = std::max(residual_, std::abs(f0 - 0.5));
        if (std::abs(f0 - 0.5) > cfg_.tolerance) throw ConstructionError("f(0) != 1/2 within tolerance", residual_);

        grid_t_ = grid(cfg_.grid_step);
        grid_f_.resize(grid_t_.size());
        sup_f_ = 0.0;
        sup_eta_ = 0.0;
        sup_f_log_f_ = 0.0;
        weighted_sup_ = 0.0;
        for (std::size_t j = 0; j < grid_t_.size(); ++j) {
            const double t = grid_t_[j];
            const double f = quadrature_f(t);
            grid_f_[j] = f;
            const double a = std::abs(f);
            sup_f_ = std::max(sup_f_, a);
            sup_eta_ = std::max(sup_eta_, eta(0.5 * a));
            sup_f_log_f_ = std::max(sup_f_log_f_, eta(a));
            weighted_sup_ = std::max(weighted_sup_, a * std::exp(std::pow(t, alpha_)));
        }
        // |g| <= int ghat = 1 gives |f| <= 1/2, attained at 0; the scan has to agree
        if (sup_f_ > 0.5 + cfg_.tolerance) throw ConstructionError("|f| exceeds 1/2 on the grid", sup_f_ - 0.5);
        sup_f_ = 0.5;
        // eta increases on [0, 1/e]; |f| takes every value in [0, sup_f] by continuity
        const double inv_e = std::exp(-1.0);
        sup_eta_ = std::max(sup_eta_, eta(std::min(0.5 * sup_f_, inv_e)));
        sup_f_log_f_ = std::max(sup_f_log_f_, sup_f_ >= inv_e ? inv_e : eta(sup_f_));

        // envelope: decay exponent of g, rate at half the chord slope to the tail level
        envelope_.beta = decay_exponent();
        double tail = 0.0;
        for (std::size_t j = 0; j < grid_t_.size(); ++j)
            if (grid_t_[j] >= 0.9 * cfg_.t_max) tail = std::max(tail, std::abs(grid_f_[j]));
        tail = std::max(tail, std::numeric_limits<double>::min());
        const double chord = (std::log(0.5) - std::log(tail)) / std::pow(cfg_.t_max, envelope_.beta);
        envelope_.c = std::max(0.0, 0.5 * chord);
        double K = 0.0;
        for (std::size_t j = 0; j < grid_t_.size(); ++j)
            K = std::max(K, std::abs(grid_f_[j]) * std::exp(envelope_.c * std::pow(grid_t_[j], envelope_.beta)));
        envelope_.K = K;
    }

    double alpha_ = 0.0;
    double rho_ = 0.0;
    QuadratureConfig cfg_;
    double norm_ = 1.0;
    double u_max_ = 0.0;
    double residual_ = 0.0;
    std::vector<double> sigma_, weight_;
    std::vector<std::vector<double>> table_;
    double sup_f_ = 0.0, sup_eta_ = 0.0, sup_f_log_f_ = 0.0, weighted_sup_ = 0.0;
    Envelope envelope_;
    std::vector<double> grid_t_, grid_f_;
    std::shared_ptr<Cache> cache_;
};

// ---------------------------------------------------------------------------
// Scalar surrogate of the vacuum two-point identity.
//
// a_N, b_N (N >= 0) stand for the per-eigenvalue coefficients of
// <Omega, x e^{itL0} y Omega> = sum a_N e^{iNt} and
// <Omega, y e^{-itL0} x Omega> = sum b_N e^{-iNt}; locality becomes
// A(t) = B(t) on (-delta, delta).

struct SyntheticPair {
    std::vector<std::complex<double>> a, b;
    double delta = 0.0;
    double gap_certificate = 0.0;  ///< max |A(t) - B(t)| sampled on (-delta, delta)
    double tail_mass = 0.0;        ///< relative coefficient mass past freq_cut

    static SyntheticPair from_sequences(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b,
                                        double delta) {
        SyntheticPair p;
        const std::size_t n = std::max(a.size(), b.size());
        a.resize(n);
        b.resize(n);
        p.a = std::move(a);
        p.b = std::move(b);
        p.delta = delta;
        p.gap_certificate = p.sampled_gap();
        return p;
    }

    double sampled_gap(std::size_t samples = 401) const {
        double gap = 0.0;
        for (std::size_t j = 1; j < samples; ++j) {
            const double t = delta * (-1.0 + 2.0 * j / samples);
            std::complex<double> A = 0.0, B = 0.0;
            for (std::size_t n = 0; n < a.size(); ++n) {
                const std::complex<double> e = std::polar(1.0, static_cast<double>(n) * t);
                A += a[n] * e;
                B += b[n] * std::conj(e);
            }
            gap = std::max(gap, std::abs(A - B));
        }
        return gap;
    }

    double l1_mass() const {
        double s = 0.0;
        for (std::size_t n = 0; n < a.size(); ++n) s += std::abs(a[n]) + std::abs(b[n]);
        return s;
    }
};

/// Pair from a smooth 2pi-periodic G supported in delta <= |t| <= pi: a random
/// trigonometric polynomial times the widest standard bump on that arc.
inline SyntheticPair make_synthetic_pair(double delta, std::size_t freq_cut, std::uint64_t seed,
                                         double tail_tolerance = 1e-7) {
    if (!(delta > 0.0 && delta < kPi)) throw DomainError("make_synthetic_pair: delta must lie in (0, pi)");
    if (freq_cut == 0) throw DomainError("make_synthetic_pair: freq_cut must be positive");
    using cd = std::complex<double>;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    constexpr int kDegree = 2;
    std::vector<cd> poly(2 * kDegree + 1);
    double l1 = 0.0;
    for (auto& c : poly) {
        c = cd(normal(rng), normal(rng));
        l1 += std::abs(c);
    }
    for (auto& c : poly) c /= l1;

    std::size_t samples = 4096;
    while (samples < 16 * freq_cut) samples *= 2;
    const double half_width = kPi - delta;
    std::vector<cd> G(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        const double t = 2.0 * kPi * j / samples;
        const double x = (t - kPi) / half_width;
        if (std::abs(x) >= 1.0) continue;
        const double bump = std::exp(1.0 - 1.0 / (1.0 - x * x));
        cd p = 0.0;
        for (int m = -kDegree; m <= kDegree; ++m) p += poly[m + kDegree] * std::polar(1.0, m * t);
        G[j] = p * bump;
    }
    // trapezoid = exact DFT for a smooth periodic function, up to aliasing
    const auto cut = static_cast<long>(freq_cut);
    auto coefficient = [&](long n) {
        cd s = 0.0;
        for (std::size_t j = 0; j < samples; ++j) {
            if (G[j] == cd(0.0)) continue;
            s += G[j] * std::polar(1.0, -static_cast<double>(n) * 2.0 * kPi * j / samples);
        }
        return s / static_cast<double>(samples);
    };
    std::vector<cd> pos(cut + 1), neg(cut + 1);
    double kept = 0.0, tail = 0.0;
    for (long n = 0; n <= cut; ++n) {
        pos[n] = coefficient(n);
        neg[n] = n == 0 ? pos[0] : coefficient(-n);
        kept += std::abs(pos[n]) + (n ? std::abs(neg[n]) : 0.0);
    }
    for (long n = cut + 1; n <= 2 * cut; ++n) tail += std::abs(coefficient(n)) + std::abs(coefficient(-n));
    const double rel_tail = kept > 0.0 ? tail / kept : 0.0;
    if (rel_tail > tail_tolerance) throw ConstructionError("freq_cut too small for the bump", rel_tail);

    std::vector<cd> a(cut + 1), b(cut + 1);
    a[0] = pos[0] + 1.0;
    b[0] = 1.0;
    for (long n = 1; n <= cut; ++n) {
        a[n] = pos[n];
        b[n] = -neg[n];
    }
    auto pair = SyntheticPair::from_sequences(std::move(a), std::move(b), delta);
    pair.tail_mass = rel_tail;
    return pair;
}

/// |sum_N (a_N + b_N) f(delta N) - sum_N a_N|. Needs delta * freq_cut <= T0.
inline double verify_spectral_identity(const EnergyFunction& ef, const SyntheticPair& pair) {
    std::complex<double> lhs = 0.0, rhs = 0.0;
    for (std::size_t n = 0; n < pair.a.size(); ++n) {
        const FValue fv = ef.at(pair.delta, static_cast<long>(n));
        if (fv.is_envelope) throw DomainError("verify_spectral_identity: delta * N exceeds the quadrature range");
        const double f = fv.value;
        lhs += (pair.a[n] + pair.b[n]) * f;
        rhs += pair.a[n];
    }
    return std::abs(lhs - rhs);
}

}  // namespace entbound
