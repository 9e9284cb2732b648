#pragma once

// Closed-form entropy bounds built from the spectrum and the energy function,
// the partition-function trace bound with explicit constants, and the
// singular-value p-sum used as the finite-dimensional nuclearity index.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <locale>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <Eigen/SVD>

#include "entbound/energy_function.hpp"
#include "entbound/errors.hpp"
#include "entbound/linalg.hpp"
#include "entbound/spectral_models.hpp"
#include "entbound/theta.hpp"

namespace entbound {

namespace detail {

inline std::string num(double x) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << x;
    return os.str();
}

inline double big_to_double(const BigInt& x) {
    const double v = x.convert_to<double>();
    if (!std::isfinite(v)) throw DivergenceError("dimension sum exceeds the double range");
    return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// distance-regularized bound

struct SeriesConfig {
    double rel_stop = 1e-18;                 ///< a term is negligible below this times the running sum
    int stop_run = 10;                       ///< consecutive negligible terms before stopping
    std::size_t hard_cap = 50'000'000;       ///< N beyond which the series is declared divergent
};

struct DistanceBound {
    double C_delta = 0.0;
    double S_delta = 0.0;
    double H_bound = 0.0;         ///< C log C + S
    std::size_t N_max = 0;        ///< last summed N
    double tail_estimate = 0.0;   ///< sum of the C-terms over (N_max, 2 N_max]
    bool envelope_used = false;   ///< some |f_delta(N)| came from the envelope
    bool majorant_used = false;   ///< some d_N came from the growth fit beyond the exact range
};

inline DistanceBound distance_regularized_bound(const SpectrumModel& model, const EnergyFunction& ef, double delta,
                                                const GrowthFit& fit, const SeriesConfig& cfg = {}) {
    if (!(delta > 0.0)) throw DomainError("distance_regularized_bound: delta must be positive");
    const auto finite_end = model.support_end();
    if (!finite_end && !(ef.alpha() > fit.kappa))
        throw DivergenceError("decay exponent alpha = " + detail::num(ef.alpha()) +
                              " does not exceed the fitted growth exponent kappa = " + detail::num(fit.kappa));
    const std::size_t exact_end = finite_end ? *finite_end : fit.certified_range;
    const auto logd = log_dims(model.dims(exact_end));

    DistanceBound out;
    const double log2 = std::log(2.0);
    // log of 2 d_N |f_delta(N)|; the S-term is that times (log 2 - log|f|)
    auto log_terms = [&](std::size_t N, double& log_c, double& log_s) {
        double ld;
        if (N <= exact_end) {
            ld = logd[N];
        } else {
            ld = fit.log_majorant(static_cast<double>(N));
            out.majorant_used = true;
        }
        const double t = delta * static_cast<double>(N);
        double lf;
        if (t <= ef.t_max()) {
            const double f = std::abs(ef.at(delta, static_cast<long>(N)).value);
            lf = f > 0.0 ? std::log(f) : -std::numeric_limits<double>::infinity();
        } else {
            lf = ef.envelope().log_at(t);
            out.envelope_used = true;
        }
        log_c = log2 + ld + lf;
        log_s = std::isfinite(log_c) ? log_c + std::log(log2 - lf) : log_c;
    };

    double sum_c = 0.0, sum_s = 0.0;
    int quiet = 0;
    std::size_t N = 0;
    for (;; ++N) {
        if (finite_end && N > *finite_end) break;
        if (N > cfg.hard_cap)
            throw DivergenceError("series did not settle by N = " + std::to_string(cfg.hard_cap) + " (alpha = " +
                                  detail::num(ef.alpha()) + ", fitted kappa = " + detail::num(fit.kappa) + ")");
        double lc, ls;
        log_terms(N, lc, ls);
        if (lc > 700.0 || ls > 700.0)
            throw DivergenceError("series terms overflow at N = " + std::to_string(N) + "; increase delta");
        const double tc = std::exp(lc), ts = N > 0 ? std::exp(ls) : 0.0;
        sum_c += tc;
        sum_s += ts;
        if (!std::isfinite(sum_c) || !std::isfinite(sum_s)) throw DivergenceError("series sum overflows");
        const bool small = tc <= cfg.rel_stop * sum_c && ts <= cfg.rel_stop * std::max(sum_s, sum_c);
        quiet = small ? quiet + 1 : 0;
        if (quiet >= cfg.stop_run) break;
    }
    out.N_max = finite_end ? std::min(N, *finite_end) : N;
    if (!finite_end) {
        for (std::size_t M = out.N_max + 1; M <= 2 * out.N_max + 1; ++M) {
            double lc, ls;
            log_terms(M, lc, ls);
            out.tail_estimate += std::exp(lc);
        }
    }
    out.C_delta = sum_c;
    out.S_delta = sum_s;
    out.H_bound = sum_c * std::log(sum_c) + sum_s;
    return out;
}

// ---------------------------------------------------------------------------
// cutoff bounds

struct CutoffBound {
    double c_deltaE = 0.0;
    double S_deltaE = 0.0;
    double C_E = 0.0;
    double S_E = 0.0;
    double S_E_literal = 0.0;  ///< S_E with the literal sup |f log f|
    double HE_bound = 0.0;     ///< C_E log C_E + S_E
    bool envelope_used = false;
};

/// C_E, S_E and HE_bound never look at delta.
inline CutoffBound cutoff_caps(const std::vector<BigInt>& dims, const EnergyFunction& ef, std::size_t E) {
    BigInt total = 0;
    for (std::size_t N = 0; N <= E; ++N) total += dims[N];
    const double all = detail::big_to_double(total);
    const double excited = detail::big_to_double(total - dims[0]);
    CutoffBound b;
    b.C_E = 2.0 * ef.sup_f() * all;
    b.S_E = 4.0 * ef.sup_eta() * excited;
    b.S_E_literal = 4.0 * ef.sup_f_log_f() * excited;
    b.HE_bound = b.C_E * std::log(b.C_E) + b.S_E;
    return b;
}

inline CutoffBound cutoff_bound(const SpectrumModel& model, const EnergyFunction& ef, double delta, std::size_t E) {
    if (!(delta > 0.0)) throw DomainError("cutoff_bound: delta must be positive");
    const auto dims = model.dims(E);
    CutoffBound b = cutoff_caps(dims, ef, E);
    for (std::size_t N = 0; N <= E; ++N) {
        if (dims[N].is_zero()) continue;
        const FValue fv = ef.at(delta, static_cast<long>(N));
        b.envelope_used = b.envelope_used || fv.is_envelope;
        const double d = detail::big_to_double(dims[N]);
        const double f = std::abs(fv.value);
        b.c_deltaE += 2.0 * d * f;
        if (N > 0) b.S_deltaE += 4.0 * d * eta(0.5 * f);
    }
    return b;
}

/// One (delta, E) evaluation with the optional oracle.
struct BoundReport {
    std::string model;
    double alpha = 0.0;
    std::optional<double> delta;
    std::optional<std::size_t> E;
    CutoffBound cutoff;
    std::optional<OracleReport> oracle;
    bool oracle_skipped = false;  ///< D above the oracle limit
};

inline BoundReport make_bound_report(const SpectrumModel& model, const EnergyFunction& ef, double delta,
                                     std::size_t E, std::size_t oracle_limit = kDefaultOracleLimit) {
    BoundReport r;
    r.model = model.id();
    r.alpha = ef.alpha();
    r.delta = delta;
    r.E = E;
    r.cutoff = cutoff_bound(model, ef, delta, E);
    BigInt D = 0;
    for (const auto& d : model.dims(E)) D += d;
    if (D <= oracle_limit && delta * static_cast<double>(E) <= ef.t_max()) {
        const auto space = build_truncated_space(model, E, oracle_limit);
        r.oracle = oracle_vs_bounds(space, ef, delta, oracle_limit);
    } else {
        r.oracle_skipped = true;
    }
    return r;
}

// ---------------------------------------------------------------------------
// partition-function trace and its explicit bound

struct TraceValue {
    double value = 0.0;       ///< sum_{N <= n_trunc} d_N e^{-beta N}
    double tail_bound = 0.0;  ///< C sum_{N > n_trunc} e^{N^kappa - beta N}
    double total() const { return value + tail_bound; }
};

inline TraceValue trace_partition(const SpectrumModel& model, double beta, std::size_t n_trunc,
                                  const GrowthFit* fit = nullptr, std::size_t hard_cap = 10'000'000) {
    if (!(beta > 0.0)) throw DomainError("trace_partition: beta must be positive");
    TraceValue tv;
    const auto logd = log_dims(model.dims(n_trunc));
    for (std::size_t N = 0; N <= n_trunc; ++N) tv.value += std::exp(logd[N] - beta * static_cast<double>(N));
    if (!std::isfinite(tv.value)) throw DivergenceError("trace sum overflows at beta = " + detail::num(beta));

    const auto end = model.support_end();
    if (end && n_trunc >= *end) return tv;
    if (!fit) throw DomainError("trace_partition: the tail past n_trunc needs a growth fit");
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t N = n_trunc + 1;; ++N) {
        if (N > hard_cap)
            throw DivergenceError("trace tail does not decay for beta = " + detail::num(beta) +
                                  " with fitted kappa = " + detail::num(fit->kappa));
        const double le = fit->log_majorant(static_cast<double>(N)) - beta * static_cast<double>(N);
        if (le > 700.0) throw DivergenceError("trace tail overflows for beta = " + detail::num(beta));
        const double term = std::exp(le);
        tv.tail_bound += term;
        if (term < prev && term <= 1e-18 * tv.total()) {
            // exponent concave in N: once decreasing, the rest is below a geometric series
            const double ratio = std::exp(fit->kappa * std::pow(static_cast<double>(N), fit->kappa - 1.0) - beta);
            if (ratio < 1.0) {
                tv.tail_bound += term * ratio / (1.0 - ratio);
                break;
            }
        }
        prev = term;
    }
    return tv;
}

struct TraceBoundConstants {
    double kappa = 0.0;
    double C_growth = 0.0;
    double b1 = 0.0, c0 = 0.0, c1 = 0.0, c2 = 0.0;
    double log_a2 = 0.0;
    double exp_sum = 0.0;  ///< sum_{N >= 0} e^{-N^kappa}
    double a = 0.0, b = 1.0, c = 0.0;

    /// (2/beta)^{1/(1-kappa)}
    double A(double beta) const { return std::pow(2.0 / beta, 1.0 / (1.0 - kappa)); }
    /// a exp(b beta^{-c})
    double bound(double beta) const { return a * std::exp(b * std::pow(beta, -c)); }
};

/// sum_{N >= 0} e^{-N^kappa}: partial sum plus the integral majorant of the tail.
inline double stretched_exp_sum(double kappa, std::size_t partial = 10000) {
    double s = 0.0;
    for (std::size_t N = 0; N <= partial; ++N) s += std::exp(-std::pow(static_cast<double>(N), kappa));
    const double M = static_cast<double>(partial);
    return s + boost::math::tgamma(1.0 / kappa, std::pow(M, kappa)) / kappa;
}

inline TraceBoundConstants trace_bound_constants(double kappa, double C_growth) {
    if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("trace_bound_constants: kappa must lie in (0, 1)");
    if (!(C_growth > 0.0) || !std::isfinite(C_growth)) throw DomainError("trace_bound_constants: C must be positive");
    TraceBoundConstants k;
    k.kappa = kappa;
    k.C_growth = C_growth;
    k.b1 = (1.0 - kappa) * std::pow(kappa, -kappa / (1.0 - kappa));
    k.c0 = 1.0 / (1.0 - kappa);
    k.c1 = kappa / (1.0 - kappa);
    k.c2 = std::max(k.c0, k.c1);
    const double gap = k.c2 - k.c1;
    k.log_a2 = 1.0 + std::pow(k.b1, (gap + 1.0) / gap);
    k.exp_sum = stretched_exp_sum(kappa);
    k.a = C_growth * k.exp_sum + std::exp(k.log_a2);
    k.b = 1.0;
    k.c = k.c2;
    if (!std::isfinite(k.a)) throw DivergenceError("trace bound constant a overflows");
    return k;
}

struct TraceCheck {
    double beta = 0.0;
    double trace = 0.0;  ///< value + tail
    double bound = 0.0;
    double ratio = 0.0;  ///< bound / trace
    bool pass = false;
};

inline std::vector<TraceCheck> verify_trace_bound(const SpectrumModel& model, const GrowthFit& fit,
                                                  const std::vector<double>& betas) {
    const auto k = trace_bound_constants(fit.kappa, fit.C);
    std::vector<TraceCheck> out;
    for (double beta : betas) {
        TraceCheck t;
        t.beta = beta;
        t.trace = trace_partition(model, beta, fit.certified_range, &fit).total();
        t.bound = k.bound(beta);
        t.ratio = t.bound / t.trace;
        t.pass = t.trace <= t.bound;
        out.push_back(t);
    }
    return out;
}

/// Tr(e^{-p beta L0}), the computable majorant of the damping map's nuclearity index.
inline double nu_p_damping_bound(const SpectrumModel& model, double p, double beta, const GrowthFit& fit) {
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("nu_p_damping_bound: p must lie in (0, 1]");
    if (!(beta > 0.0)) throw DomainError("nu_p_damping_bound: beta must be positive");
    return trace_partition(model, p * beta, fit.certified_range, &fit).total();
}

// ---------------------------------------------------------------------------
// singular-value p-sums

inline double schatten_p(const CMatrix& m, double p) {
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("schatten_p: p must lie in (0, 1]");
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto& sv = svd.singularValues();
    // values below the numerical-rank threshold are round-off; sigma^p would amplify them
    const double cutoff = std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(m.rows(), m.cols())) * sv(0);
    double s = 0.0;
    for (double sigma : sv)
        if (sigma > cutoff) s += std::pow(sigma, p);
    return s;
}

inline double operator_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

/// Slacks are rhs - lhs; nonnegative (up to tolerance) means the property holds.
struct QuasinormReport {
    double p = 0.0;
    double homogeneity = 0.0;     ///< |nu(lambda T) / (|lambda|^p nu(T)) - 1|
    double subadditivity = 0.0;
    double ideal = 0.0;
    double family = 0.0;          ///< N^{(1-p)/p} sum nu(T_k)^{1/p} - nu(sum T_k)^{1/p}
    double family_lower = 0.0;    ///< nu(sum T_k)^{1/p} - sum nu(T_k)^{1/p}; informational
    bool pass = false;
};

inline QuasinormReport quasinorm_property_check(std::uint64_t seed, double p, Eigen::Index max_dim = 8,
                                                std::size_t max_family = 8) {
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("quasinorm_property_check: p must lie in (0, 1]");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> dim(1, max_dim);
    const Eigen::Index m = dim(rng), n = dim(rng), k = dim(rng), l = dim(rng);
    const CMatrix T1 = random_gaussian(m, n, rng), T2 = random_gaussian(m, n, rng);
    const CMatrix R = random_gaussian(k, m, rng), T = random_gaussian(n, l, rng);
    std::normal_distribution<double> normal;
    const cplx lambda(normal(rng), normal(rng));

    QuasinormReport r;
    r.p = p;
    const double nu1 = schatten_p(T1, p), nu2 = schatten_p(T2, p);
    r.homogeneity = std::abs(schatten_p(lambda * T1, p) / (std::pow(std::abs(lambda), p) * nu1) - 1.0);
    r.subadditivity = nu1 + nu2 - schatten_p(T1 + T2, p);
    r.ideal = std::pow(operator_norm(R), p) * nu1 * std::pow(operator_norm(T), p) - schatten_p(R * T1 * T, p);

    std::uniform_int_distribution<std::size_t> fam(2, max_family);
    const std::size_t count = fam(rng);
    CMatrix sum = CMatrix::Zero(m, n);
    double sum_norms = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        const CMatrix Tj = random_gaussian(m, n, rng);
        sum += Tj;
        sum_norms += std::pow(schatten_p(Tj, p), 1.0 / p);
    }
    const double lhs = std::pow(schatten_p(sum, p), 1.0 / p);
    const double factor = std::pow(static_cast<double>(count), (1.0 - p) / p);
    r.family = factor * sum_norms - lhs;
    r.family_lower = lhs - sum_norms;
    const double tol = 1e-9;
    r.pass = r.homogeneity <= 1e-12 && r.subadditivity >= -tol && r.ideal >= -tol && r.family >= -tol * factor * sum_norms;
    return r;
}

// ---------------------------------------------------------------------------
// E e^E scaling

struct GrowthScalingReport {
    double c = 0.0;          ///< d_N <= c e^N on 0..E_hi
    double c_prime = 0.0;    ///< c e / (e - 1): sum_{N <= E} d_N <= c' e^E
    double A = 0.0, B = 0.0;
    double constant = 0.0;   ///< A (1 + max(0, log A)) + B
    std::vector<std::pair<std::size_t, double>> ratios;  ///< (E, HE_bound / (E e^E))
    double max_ratio = 0.0;
    bool pass = false;
};

inline GrowthScalingReport growth_scaling_report(const SpectrumModel& model, const EnergyFunction& ef,
                                                 std::size_t E_lo, std::size_t E_hi) {
    if (E_lo == 0 || E_hi < E_lo) throw DomainError("growth_scaling_report: need 1 <= E_lo <= E_hi");
    const auto dims = model.dims(E_hi);
    GrowthScalingReport r;
    r.c = fit_growth_envelope(dims, 1.0).C;
    const double e = std::exp(1.0);
    r.c_prime = r.c * e / (e - 1.0);
    r.A = 2.0 * ef.sup_f() * r.c_prime;
    r.B = 4.0 * ef.sup_eta() * r.c_prime;
    r.constant = r.A * (1.0 + std::max(0.0, std::log(r.A))) + r.B;
    for (std::size_t E = E_lo; E <= E_hi; ++E) {
        const auto caps = cutoff_caps(dims, ef, E);
        const double ratio = caps.HE_bound / (static_cast<double>(E) * std::exp(static_cast<double>(E)));
        r.ratios.emplace_back(E, ratio);
        r.max_ratio = std::max(r.max_ratio, ratio);
    }
    r.pass = r.max_ratio <= r.constant;
    return r;
}

}  // namespace entbound
