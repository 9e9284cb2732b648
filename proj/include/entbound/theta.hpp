#pragma once

// Finite-cutoff realization of the vacuum two-point decomposition:
// the pure states (Omega + i^k Phi_n)/sqrt2, the signed split of the product
// functional into two positive parts, and the first-factor restriction tau
// whose entropy is the exact oracle for the cutoff bounds.

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "entbound/energy_function.hpp"
#include "entbound/entropy.hpp"
#include "entbound/linalg.hpp"
#include "entbound/spectral_models.hpp"

namespace entbound {

inline constexpr std::size_t kDefaultOracleLimit = 400;

/// Range of the spectral projection onto L0 <= E, with basis Omega, Phi_1, ...
struct TruncatedSpace {
    std::size_t E = 0;
    std::vector<BigInt> dims;   ///< d_0..d_E
    std::vector<long> level;    ///< l_n per basis index, nondecreasing, level[0] = 0

    std::size_t total_dim() const noexcept { return level.size(); }
};

inline TruncatedSpace build_truncated_space(const SpectrumModel& model, std::size_t E, std::size_t max_dim = 1u << 20) {
    TruncatedSpace space;
    space.E = E;
    space.dims = model.dims(E);
    if (space.dims[0] != 1) throw InvariantError("spectrum must have d_0 = 1");
    BigInt total = 0;
    for (const auto& d : space.dims) total += d;
    if (total > max_dim)
        throw SizeError("truncated space has dimension " + total.str() + " > " + std::to_string(max_dim));
    for (std::size_t N = 0; N <= E; ++N) {
        const auto d = space.dims[N].convert_to<std::size_t>();
        space.level.insert(space.level.end(), d, static_cast<long>(N));
    }
    return space;
}

inline cplx i_pow(int k) {
    static const std::array<cplx, 4> powers{cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
    return powers[((k % 4) + 4) % 4];
}

/// (Omega + i^k Phi_n) / sqrt 2.
inline CVector pure_state_vector(const TruncatedSpace& space, int k, std::size_t n) {
    if (n == 0) throw DomainError("pure_state_vector: n = 0 is the vacuum, not a Phi_n");
    if (n >= space.total_dim()) throw DomainError("pure_state_vector: n out of range");
    CVector v = CVector::Zero(static_cast<Eigen::Index>(space.total_dim()));
    const double r = 1.0 / std::sqrt(2.0);
    v(0) = r;
    v(static_cast<Eigen::Index>(n)) = i_pow(k) * r;
    return v;
}

/// phi(x) = <v, x v>.
inline cplx vector_state(const CVector& v, const CMatrix& x) { return v.dot(x * v); }

/// Residuals of <Omega, x Phi_n> = sum_k (i^{-k}/2) phi_{k,n}(x) and
/// <Phi_n, x Omega> = sum_k (i^k/2) phi_{k,n}(x).
inline std::pair<double, double> polarization_check(const TruncatedSpace& space, const CMatrix& x, std::size_t n) {
    cplx first = 0.0, second = 0.0;
    for (int k = 0; k < 4; ++k) {
        const cplx phi = vector_state(pure_state_vector(space, k, n), x);
        first += 0.5 * i_pow(-k) * phi;
        second += 0.5 * i_pow(k) * phi;
    }
    const auto m = static_cast<Eigen::Index>(n);
    return {std::abs(x(0, m) - first), std::abs(x(m, 0) - second)};
}

/// One basis index n >= 1 of the decomposition.
struct ThetaTerm {
    std::size_t n = 0;
    double f = 0.0;       ///< f_delta(l_n)
    double weight = 0.0;  ///< |f_delta(l_n)| / 2
    int a = 0;            ///< 1 iff f_delta(l_n) > 0
    int b = 0;            ///< 1 iff f_delta(l_n) < 0
};

/// theta_plus  = omega x omega + sum_n sum_l w_n phi_{l,n} x (a phi_{l,n} + b phi_{l+2,n})
/// theta_minus =                 sum_n sum_l w_n phi_{l,n} x (b phi_{l,n} + a phi_{l+2,n})
struct ThetaDecomposition {
    double delta = 0.0;
    std::vector<ThetaTerm> terms;
    std::size_t dropped = 0;      ///< terms with |f| below the underflow floor
    double dropped_mass = 0.0;    ///< sum of 2|f| over dropped terms

    double plus_mass() const {
        double s = 1.0;
        for (const auto& t : terms) s += 4.0 * t.weight * (t.a + t.b);
        return s;
    }
};

inline constexpr double kUnderflowFloor = 1e-300;

inline double f_for_oracle(const EnergyFunction& ef, double delta, long level) {
    const FValue v = ef.at(delta, level);
    if (v.is_envelope) throw DomainError("delta * E exceeds the quadrature range of the energy function");
    return v.value;
}

inline ThetaDecomposition assemble_theta(const TruncatedSpace& space, const EnergyFunction& ef, double delta) {
    if (!(delta > 0.0)) throw DomainError("assemble_theta: delta must be positive");
    ThetaDecomposition th;
    th.delta = delta;
    for (std::size_t n = 1; n < space.total_dim(); ++n) {
        const double f = f_for_oracle(ef, delta, space.level[n]);
        if (std::abs(f) < kUnderflowFloor) {
            ++th.dropped;
            th.dropped_mass += 2.0 * std::abs(f);
            continue;
        }
        th.terms.push_back({n, f, 0.5 * std::abs(f), f > 0.0 ? 1 : 0, f < 0.0 ? 1 : 0});
    }
    return th;
}

/// theta_plus(x (x) y) - theta_minus(x (x) y) from the stored terms.
inline cplx theta_difference(const TruncatedSpace& space, const ThetaDecomposition& th, const CMatrix& x,
                             const CMatrix& y) {
    cplx s = x(0, 0) * y(0, 0);
    for (const auto& t : th.terms) {
        for (int l = 0; l < 4; ++l) {
            const cplx px = vector_state(pure_state_vector(space, l, t.n), x);
            const cplx py = vector_state(pure_state_vector(space, l, t.n), y);
            const cplx py2 = vector_state(pure_state_vector(space, l + 2, t.n), y);
            const cplx plus = t.weight * px * (static_cast<double>(t.a) * py + static_cast<double>(t.b) * py2);
            const cplx minus = t.weight * px * (static_cast<double>(t.b) * py + static_cast<double>(t.a) * py2);
            s += plus - minus;
        }
    }
    return s;
}

/// <Omega, (x f_delta(L0) y + y f_delta(L0) x) Omega> with f_delta(L0) diagonal.
inline cplx theta_direct(const TruncatedSpace& space, const EnergyFunction& ef, double delta, const CMatrix& x,
                         const CMatrix& y) {
    cplx s = 0.0;
    for (std::size_t m = 0; m < space.total_dim(); ++m) {
        const auto k = static_cast<Eigen::Index>(m);
        const double f = f_for_oracle(ef, delta, space.level[m]);
        s += f * (x(0, k) * y(k, 0) + y(0, k) * x(k, 0));
    }
    return s;
}

/// Relative residual between the decomposition and the direct expression.
inline double theta_product_identity_check(const TruncatedSpace& space, const EnergyFunction& ef, double delta,
                                           const CMatrix& x, const CMatrix& y) {
    const auto th = assemble_theta(space, ef, delta);
    const cplx lhs = theta_difference(space, th, x, y);
    const cplx rhs = theta_direct(space, ef, delta, x, y);
    const double scale = std::max(1.0, x.operatorNorm() * y.operatorNorm());
    return std::abs(lhs - rhs) / scale;
}

/// Density form of theta_plus (sign = +1) or theta_minus (sign = -1) on the
/// doubled space, as sum_j w_j |u_j><u_j| (x) |v_j><v_j|.
inline CMatrix theta_density(const TruncatedSpace& space, const ThetaDecomposition& th, int sign) {
    const auto D = static_cast<Eigen::Index>(space.total_dim());
    CMatrix out = CMatrix::Zero(D * D, D * D);
    auto add = [&](double w, const CVector& u, const CVector& v) {
        CVector uv(D * D);
        for (Eigen::Index i = 0; i < D; ++i) uv.segment(i * D, D) = u(i) * v;
        out.noalias() += w * uv * uv.adjoint();
    };
    if (sign > 0) {
        CVector omega = CVector::Zero(D);
        omega(0) = 1.0;
        add(1.0, omega, omega);
    }
    for (const auto& t : th.terms) {
        const int same = sign > 0 ? t.a : t.b;
        const int shifted = sign > 0 ? t.b : t.a;
        for (int l = 0; l < 4; ++l) {
            const CVector u = pure_state_vector(space, l, t.n);
            if (same) add(t.weight, u, u);
            if (shifted) add(t.weight, u, pure_state_vector(space, l + 2, t.n));
        }
    }
    return out;
}

/// tau(x) = theta_plus(x (x) 1): vacuum weight 1 and weight |f_delta(l_n)|/2 on
/// each of the four phi_{k,n}.
inline WeightedPureEnsemble tau_ensemble(const TruncatedSpace& space, const EnergyFunction& ef, double delta) {
    const auto th = assemble_theta(space, ef, delta);
    const auto D = static_cast<Eigen::Index>(space.total_dim());
    WeightedPureEnsemble ens(D);
    CVector omega = CVector::Zero(D);
    omega(0) = 1.0;
    ens.add(1.0, omega);
    for (const auto& t : th.terms)
        for (int k = 0; k < 4; ++k) ens.add(t.weight, pure_state_vector(space, k, t.n));
    return ens;
}

/// c_{delta,E} = sum_{N <= E} 2 d_N |f_delta(N)|, summed per eigenvalue.
inline double cutoff_mass(const TruncatedSpace& space, const EnergyFunction& ef, double delta) {
    double s = 0.0;
    for (std::size_t N = 0; N <= space.E; ++N) {
        if (space.dims[N].is_zero()) continue;
        s += 2.0 * space.dims[N].convert_to<double>() * std::abs(f_for_oracle(ef, delta, static_cast<long>(N)));
    }
    return s;
}

struct OracleReport {
    std::size_t dim = 0;
    double exact_entropy = 0.0;    ///< S_vN(tau / ||tau||)
    double c_deltaE = 0.0;         ///< tau total mass
    double S_deltaE = 0.0;         ///< sum_k eta(lambda_k)
    double concavity_bound = 0.0;  ///< log c + S / c
    double scaled_entropy = 0.0;   ///< c * exact
    double gap = 0.0;              ///< concavity_bound - exact_entropy
    bool pass = false;
};

inline OracleReport oracle_vs_bounds(const TruncatedSpace& space, const EnergyFunction& ef, double delta,
                                     std::size_t limit = kDefaultOracleLimit) {
    if (space.total_dim() > limit)
        throw SizeError("oracle dimension " + std::to_string(space.total_dim()) + " exceeds the limit " +
                        std::to_string(limit) + "; lower E");
    const auto ens = tau_ensemble(space, ef, delta);
    OracleReport r;
    r.dim = space.total_dim();
    r.exact_entropy = von_neumann_entropy(assemble_density(ens));
    r.c_deltaE = ens.total();
    for (double w : ens.weights()) r.S_deltaE += eta(w);
    r.concavity_bound = ensemble_entropy_bound(ens);
    r.scaled_entropy = r.c_deltaE * r.exact_entropy;
    r.gap = r.concavity_bound - r.exact_entropy;
    r.pass = r.gap >= -1e-9;
    return r;
}

}  // namespace entbound
