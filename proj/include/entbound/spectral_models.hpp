#pragma once

// Eigenspace dimensions d_N = dim ker(L0 - N) of concrete chiral models.
//
// Built-in spectra are exact (arbitrary precision); anything compared against
// an exponential envelope goes through log-space doubles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "entbound/errors.hpp"

namespace entbound {

using BigInt = boost::multiprecision::cpp_int;

/// Natural log of a nonnegative big integer; -inf for zero.
inline double log_bigint(const BigInt& x) {
    if (x.is_zero()) return -std::numeric_limits<double>::infinity();
    if (x.sign() < 0) throw DomainError("log_bigint: negative argument");
    const std::size_t bits = boost::multiprecision::msb(x);
    if (bits < 900) return std::log(x.convert_to<double>());
    const std::size_t shift = bits - 64;
    const BigInt top = x >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

/// p(0..n_max) by Euler's pentagonal-number recurrence.
inline std::vector<BigInt> partition_numbers(std::size_t n_max) {
    std::vector<BigInt> p(n_max + 1);
    p[0] = 1;
    for (std::size_t n = 1; n <= n_max; ++n) {
        BigInt acc = 0;
        for (std::size_t k = 1;; ++k) {
            const std::size_t g1 = k * (3 * k - 1) / 2;
            if (g1 > n) break;
            const std::size_t g2 = k * (3 * k + 1) / 2;
            if (k % 2 == 1) {
                acc += p[n - g1];
                if (g2 <= n) acc += p[n - g2];
            } else {
                acc -= p[n - g1];
                if (g2 <= n) acc -= p[n - g2];
            }
        }
        p[n] = std::move(acc);
    }
    return p;
}

/// Hardy-Ramanujan leading term log[(1/(4 sqrt3 N)) exp(pi sqrt(2N/3))].
inline double log_partition_asymptotic(double n) {
    const double pi = 3.14159265358979323846;
    return -std::log(4.0 * std::sqrt(3.0) * n) + pi * std::sqrt(2.0 / 3.0) * std::sqrt(n);
}

/// Cauchy product of two dimension sequences, truncated to the shorter length.
inline std::vector<BigInt> convolve(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    std::vector<BigInt> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        BigInt acc = 0;
        for (std::size_t i = 0; i <= k; ++i) {
            if (a[i].is_zero() || b[k - i].is_zero()) continue;
            acc += a[i] * b[k - i];
        }
        out[k] = std::move(acc);
    }
    return out;
}

/// Parse the line-based "N d_N" spectrum format. Missing N are zero.
inline std::vector<BigInt> parse_spectrum(std::istream& in) {
    std::vector<std::pair<std::size_t, BigInt>> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        std::string n_str, d_str, extra;
        if (!(fields >> n_str >> d_str) || (fields >> extra))
            throw ParseError("expected two fields 'N d_N'", lineno);
        auto all_digits = [](const std::string& s) {
            return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
        };
        if (!all_digits(n_str) || !all_digits(d_str))
            throw ParseError("fields must be nonnegative base-10 integers", lineno);
        if (n_str.size() > 9) throw ParseError("N out of range", lineno);
        const std::size_t n = std::stoul(n_str);
        if (!records.empty() && n <= records.back().first)
            throw ParseError("N must be strictly increasing", lineno);
        records.emplace_back(n, BigInt(d_str));
    }
    if (records.empty()) throw ParseError("spectrum file has no records");
    std::vector<BigInt> dims(records.back().first + 1, BigInt(0));
    for (auto& [n, d] : records) dims[n] = std::move(d);
    if (dims[0] != 1) throw InvariantError("custom spectrum must have d_0 = 1 (unique vacuum)");
    return dims;
}

/// A chiral spectrum: u1_current, virasoro_vacuum, tensor_power(base, m) or custom.
/// Immutable after construction.
class SpectrumModel {
public:
    enum class Kind { u1_current, virasoro_vacuum, tensor_power, custom };

    static SpectrumModel u1_current() { return SpectrumModel(Kind::u1_current, "u1_current"); }
    static SpectrumModel virasoro_vacuum() { return SpectrumModel(Kind::virasoro_vacuum, "virasoro_vacuum"); }

    static SpectrumModel tensor_power(const SpectrumModel& base, unsigned m) {
        if (m == 0) throw DomainError("tensor_power: m must be positive");
        SpectrumModel out(Kind::tensor_power, base.id() + "^" + std::to_string(m));
        out.base_ = std::make_shared<const SpectrumModel>(base);
        out.power_ = m;
        return out;
    }

    static SpectrumModel custom(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open spectrum file '" + path + "'");
        SpectrumModel out(Kind::custom, "custom(" + path + ")");
        out.table_ = parse_spectrum(in);
        return out;
    }

    /// Custom model from an in-memory table (entries past the end are zero).
    static SpectrumModel from_dims(std::string name, std::vector<BigInt> dims) {
        if (dims.empty() || dims[0] != 1) throw InvariantError("spectrum must have d_0 = 1 (unique vacuum)");
        for (const auto& d : dims)
            if (d.sign() < 0) throw InvariantError("spectrum dimensions must be nonnegative");
        SpectrumModel out(Kind::custom, std::move(name));
        out.table_ = std::move(dims);
        return out;
    }

    Kind kind() const noexcept { return kind_; }
    const std::string& id() const noexcept { return id_; }

    /// d_0..d_{n_max}.
    std::vector<BigInt> dims(std::size_t n_max) const {
        switch (kind_) {
        case Kind::u1_current:
            return partition_numbers(n_max);
        case Kind::virasoro_vacuum: {
            // generating function prod_{n>=2} (1-q^n)^{-1} = (1-q) prod_{n>=1} (1-q^n)^{-1}
            auto p = partition_numbers(n_max);
            std::vector<BigInt> d(n_max + 1);
            d[0] = 1;
            for (std::size_t n = 1; n <= n_max; ++n) d[n] = p[n] - p[n - 1];
            return d;
        }
        case Kind::tensor_power: {
            const auto base = base_->dims(n_max);
            auto d = base;
            for (unsigned k = 1; k < power_; ++k) d = convolve(d, base);
            return d;
        }
        case Kind::custom: {
            std::vector<BigInt> d(n_max + 1, BigInt(0));
            for (std::size_t n = 0; n <= n_max && n < table_.size(); ++n) d[n] = table_[n];
            return d;
        }
        }
        return {};
    }

    /// Largest N with a nonzero entry, for finite custom tables; none for built-ins.
    std::optional<std::size_t> support_end() const {
        if (kind_ == Kind::custom) return table_.size() - 1;
        return std::nullopt;
    }

private:
    SpectrumModel(Kind kind, std::string id) : kind_(kind), id_(std::move(id)) {}

    Kind kind_;
    std::string id_;
    std::shared_ptr<const SpectrumModel> base_;
    unsigned power_ = 1;
    std::vector<BigInt> table_;
};

inline std::vector<BigInt> model_dims(const SpectrumModel& model, std::size_t n_max) { return model.dims(n_max); }

/// log d_N as doubles (-inf where d_N = 0).
inline std::vector<double> log_dims(const std::vector<BigInt>& dims) {
    std::vector<double> out(dims.size());
    std::transform(dims.begin(), dims.end(), out.begin(), [](const BigInt& d) { return log_bigint(d); });
    return out;
}

/// Range-certified constant C with d_N <= C exp(N^kappa) for N <= certified_range.
struct GrowthFit {
    double kappa = 0.0;
    double C = 0.0;
    double log_C = 0.0;
    std::size_t certified_range = 0;
    std::size_t argmax = 0;  ///< N attaining the maximal ratio d_N / exp(N^kappa)
    /// True when the ratio peaks before the last tenth of the range. False means
    /// the spectrum still outgrows exp(N^kappa) at the end of the scan.
    bool plateau = false;

    /// log of the majorant C exp(N^kappa).
    double log_majorant(double n) const { return log_C + std::pow(n, kappa); }
};

/// Fit over explicit dims with exponent in (0, 1]; exponent 1 is the c e^N edge case.
inline GrowthFit fit_growth_envelope(const std::vector<BigInt>& dims, double exponent) {
    if (!(exponent > 0.0 && exponent <= 1.0)) throw DomainError("growth exponent must lie in (0, 1]");
    if (dims.empty()) throw DomainError("fit_growth_envelope: empty dims");
    GrowthFit fit;
    fit.kappa = exponent;
    fit.certified_range = dims.size() - 1;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < dims.size(); ++n) {
        const double v = log_bigint(dims[n]) - std::pow(static_cast<double>(n), exponent);
        if (v > best) {
            best = v;
            fit.argmax = n;
        }
    }
    // nudge upward so d_N <= C exp(N^kappa) survives rounding at the argmax
    fit.log_C = best + 1e-12 * std::max(1.0, std::abs(best));
    fit.C = std::exp(fit.log_C);
    fit.plateau = 10 * fit.argmax < 9 * fit.certified_range || fit.certified_range == 0;
    return fit;
}

inline GrowthFit fit_growth_constants(const SpectrumModel& model, double kappa, std::size_t n_max) {
    if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("kappa must lie in (0, 1)");
    return fit_growth_envelope(model.dims(n_max), kappa);
}

}  // namespace entbound
