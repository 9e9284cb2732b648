#pragma once

// Run configuration and the subcommand bodies of the command-line tool.
// Each cmd_* writes CSV to a stream and returns the process exit code.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "entbound/bounds.hpp"
#include "entbound/energy_function.hpp"
#include "entbound/entropy.hpp"
#include "entbound/errors.hpp"
#include "entbound/spectral_models.hpp"
#include "entbound/theta.hpp"

namespace entbound::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kDivergence = 3 };

using Settings = std::map<std::string, std::string>;

inline const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "kind", "file", "power", "n_max", "alpha", "delta", "E", "beta", "p", "kappa", "fit_n_max", "seed",
        "out", "oracle_limit", "t_max", "grid_step", "tolerance", "panels", "t_from", "t_to", "t_step", "only",
        "distance"};
    return keys;
}

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::string normalize_key(std::string k) {
    for (auto& c : k)
        if (c == '-') c = '_';
    return k;
}

/// `key = value` lines; '#' starts a comment line.
inline Settings parse_config(std::istream& in) {
    Settings s;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
        const std::string key = normalize_key(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_keys().count(key)) throw ParseError("unknown key '" + key + "'", lineno);
        if (value.empty()) throw ParseError("empty value for '" + key + "'", lineno);
        s[key] = value;
    }
    return s;
}

inline Settings read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    return parse_config(in);
}

// --- value parsing ----------------------------------------------------------

inline double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v))
        throw ParseError(key + ": '" + t + "' is not a number");
    return v;
}

inline std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ParseError(key + ": '" + t + "' is not a nonnegative integer");
    return v;
}

inline std::vector<std::string> split_list(const std::string& key, const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        const std::string item = trim(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (item.empty()) throw ParseError(key + ": empty list item");
        out.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

/// Shortest round-trip decimal form, independent of the locale.
inline std::string fmt(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

// --- RunConfig --------------------------------------------------------------

struct RunConfig {
    std::string kind = "u1";
    std::string file;
    unsigned power = 1;
    std::optional<std::size_t> n_max;
    double alpha = 0.75;
    std::vector<double> deltas{0.1, 0.5, 1.0};
    std::vector<std::size_t> Es{0, 2, 4, 6};
    std::vector<double> betas{0.5, 1.0, 2.0, 4.0};
    std::vector<double> ps{0.3, 0.5, 1.0};
    double kappa = 0.6;
    std::size_t fit_n_max = 4000;
    std::vector<std::uint64_t> seeds{1};
    std::string out;
    std::size_t oracle_limit = kDefaultOracleLimit;
    QuadratureConfig quadrature;
    double t_from = 0.0, t_to = 250.0, t_step = 1.0;
    std::vector<std::string> only;
    bool distance = false;
};

inline RunConfig make_run_config(const Settings& s) {
    RunConfig c;
    auto has = [&](const char* k) { return s.count(k) > 0; };
    auto get = [&](const char* k) { return s.at(k); };
    for (const auto& [k, v] : s)
        if (!known_keys().count(k)) throw ParseError("unknown setting '" + k + "'");

    if (has("kind")) c.kind = get("kind");
    if (has("file")) c.file = get("file");
    if (has("power")) c.power = static_cast<unsigned>(parse_unsigned("power", get("power")));
    if (has("n_max")) c.n_max = parse_unsigned("n_max", get("n_max"));
    if (has("alpha")) c.alpha = parse_double("alpha", get("alpha"));
    if (has("delta")) {
        c.deltas.clear();
        for (const auto& x : split_list("delta", get("delta"))) c.deltas.push_back(parse_double("delta", x));
    }
    if (has("E")) {
        c.Es.clear();
        for (const auto& x : split_list("E", get("E"))) c.Es.push_back(parse_unsigned("E", x));
    }
    if (has("beta")) {
        c.betas.clear();
        for (const auto& x : split_list("beta", get("beta"))) c.betas.push_back(parse_double("beta", x));
    }
    if (has("p")) {
        c.ps.clear();
        for (const auto& x : split_list("p", get("p"))) c.ps.push_back(parse_double("p", x));
    }
    if (has("kappa")) c.kappa = parse_double("kappa", get("kappa"));
    if (has("fit_n_max")) c.fit_n_max = parse_unsigned("fit_n_max", get("fit_n_max"));
    if (has("seed")) {
        c.seeds.clear();
        for (const auto& x : split_list("seed", get("seed"))) c.seeds.push_back(parse_unsigned("seed", x));
    }
    if (has("out")) c.out = get("out");
    if (has("oracle_limit")) c.oracle_limit = parse_unsigned("oracle_limit", get("oracle_limit"));
    if (has("t_max")) c.quadrature.t_max = parse_double("t_max", get("t_max"));
    if (has("grid_step")) c.quadrature.grid_step = parse_double("grid_step", get("grid_step"));
    if (has("tolerance")) c.quadrature.tolerance = parse_double("tolerance", get("tolerance"));
    if (has("panels")) c.quadrature.panels_per_oscillation = parse_double("panels", get("panels"));
    if (has("t_from")) c.t_from = parse_double("t_from", get("t_from"));
    if (has("t_to")) c.t_to = parse_double("t_to", get("t_to"));
    if (has("t_step")) c.t_step = parse_double("t_step", get("t_step"));
    if (has("only")) c.only = split_list("only", get("only"));
    if (has("distance")) {
        const auto v = get("distance");
        if (v == "1" || v == "true" || v == "yes") c.distance = true;
        else if (v == "0" || v == "false" || v == "no") c.distance = false;
        else throw ParseError("distance: expected a boolean");
    }

    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ParseError("alpha must lie in (0, 1)");
    if (!(c.kappa > 0.0 && c.kappa < 1.0)) throw ParseError("kappa must lie in (0, 1)");
    if (c.power == 0) throw ParseError("power must be positive");
    if (c.oracle_limit < 1) throw ParseError("oracle_limit must be at least 1");
    for (double d : c.deltas)
        if (!(d > 0.0)) throw ParseError("delta values must be positive");
    for (double b : c.betas)
        if (!(b > 0.0)) throw ParseError("beta values must be positive");
    for (double p : c.ps)
        if (!(p > 0.0 && p <= 1.0)) throw ParseError("p values must lie in (0, 1]");
    if (!(c.t_step > 0.0) || c.t_to < c.t_from) throw ParseError("need t_step > 0 and t_from <= t_to");
    static const std::set<std::string> suites{"polarization", "product", "spectral", "concavity", "trace", "quasinorm"};
    for (const auto& o : c.only)
        if (!suites.count(o)) throw ParseError("only: unknown suite '" + o + "'");
    return c;
}

inline SpectrumModel build_model(const RunConfig& c) {
    SpectrumModel base = [&] {
        if (c.kind == "u1" || c.kind == "u1_current") return SpectrumModel::u1_current();
        if (c.kind == "virasoro" || c.kind == "virasoro_vacuum") return SpectrumModel::virasoro_vacuum();
        if (c.kind == "custom") {
            if (c.file.empty()) throw ParseError("kind = custom needs a spectrum file");
            return SpectrumModel::custom(c.file);
        }
        throw ParseError("unknown model kind '" + c.kind + "'");
    }();
    return c.power > 1 ? SpectrumModel::tensor_power(base, c.power) : base;
}

inline EnergyFunction build_energy(const RunConfig& c) { return EnergyFunction::build(c.alpha, c.quadrature); }

/// Growth fit for infinite spectra; rejects alpha <= kappa up front.
inline std::optional<GrowthFit> checked_fit(const SpectrumModel& model, const RunConfig& c) {
    if (model.support_end()) return std::nullopt;
    if (!(c.alpha > c.kappa))
        throw DivergenceError("decay exponent alpha = " + fmt(c.alpha) + " does not exceed growth exponent kappa = " +
                              fmt(c.kappa));
    return fit_growth_constants(model, c.kappa, c.fit_n_max);
}

// --- subcommands ------------------------------------------------------------

inline int cmd_model(const RunConfig& c, std::ostream& out) {
    const auto model = build_model(c);
    const std::size_t n_max = c.n_max ? *c.n_max : model.support_end().value_or(20);
    const auto dims = model.dims(n_max);
    out << "N,d_N\n";
    for (std::size_t n = 0; n <= n_max; ++n) out << n << ',' << dims[n].str() << '\n';
    return kOk;
}

inline int cmd_energy_function(const RunConfig& c, std::ostream& out) {
    const auto ef = build_energy(c);
    out << "t,f,is_envelope\n";
    const auto steps = static_cast<std::size_t>(std::floor((c.t_to - c.t_from) / c.t_step + 1e-9));
    for (std::size_t j = 0; j <= steps; ++j) {
        const double t = c.t_from + static_cast<double>(j) * c.t_step;
        const FValue v = ef.eval(t);
        out << fmt(t) << ',' << fmt(v.value) << ',' << (v.is_envelope ? 1 : 0) << '\n';
    }
    return kOk;
}

inline int cmd_bounds(const RunConfig& c, std::ostream& out) {
    const auto model = build_model(c);
    const auto fit = checked_fit(model, c);
    const auto ef = build_energy(c);
    out << "model,alpha,delta,E,c_deltaE,S_deltaE,C_E,S_E,HE_bound,oracle_entropy,oracle_pass\n";
    for (double delta : c.deltas) {
        for (std::size_t E : c.Es) {
            const auto r = make_bound_report(model, ef, delta, E, c.oracle_limit);
            out << model.id() << ',' << fmt(c.alpha) << ',' << fmt(delta) << ',' << E << ',' << fmt(r.cutoff.c_deltaE)
                << ',' << fmt(r.cutoff.S_deltaE) << ',' << fmt(r.cutoff.C_E) << ',' << fmt(r.cutoff.S_E) << ','
                << fmt(r.cutoff.HE_bound) << ',';
            if (r.oracle) out << fmt(r.oracle->exact_entropy) << ',' << (r.oracle->pass ? 1 : 0);
            else out << ',';
            out << '\n';
        }
        if (c.distance) {
            // E column empty: c/S columns carry C_delta, S_delta and HE_bound carries the H_delta bound
            const GrowthFit g = fit ? *fit : fit_growth_envelope(model.dims(*model.support_end()), c.kappa);
            const auto d = distance_regularized_bound(model, ef, delta, g);
            out << model.id() << ',' << fmt(c.alpha) << ',' << fmt(delta) << ",," << fmt(d.C_delta) << ','
                << fmt(d.S_delta) << ",,," << fmt(d.H_bound) << ",,\n";
        }
    }
    return kOk;
}

inline int cmd_trace(const RunConfig& c, std::ostream& out) {
    const auto model = build_model(c);
    const GrowthFit fit = model.support_end() ? fit_growth_envelope(model.dims(*model.support_end()), c.kappa)
                                              : fit_growth_constants(model, c.kappa, c.fit_n_max);
    out << "model,kappa,C,beta,trace,bound,ratio,pass\n";
    bool ok = true;
    for (const auto& t : verify_trace_bound(model, fit, c.betas)) {
        ok = ok && t.pass;
        out << model.id() << ',' << fmt(fit.kappa) << ',' << fmt(fit.C) << ',' << fmt(t.beta) << ',' << fmt(t.trace)
            << ',' << fmt(t.bound) << ',' << fmt(t.ratio) << ',' << (t.pass ? 1 : 0) << '\n';
    }
    return ok ? kOk : kVerifyFailed;
}

// --- verify -----------------------------------------------------------------

struct CheckLine {
    std::string name, params;
    double value = 0.0;
    bool pass = false;
};

/// Deterministic sub-seed for draw j of a suite.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t salt, std::uint64_t j) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(j)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

inline std::vector<CheckLine> verify_polarization(std::uint64_t seed) {
    const auto space = build_truncated_space(SpectrumModel::u1_current(), 3);  // D = 7
    const auto D = static_cast<Eigen::Index>(space.total_dim());
    std::mt19937_64 rng(sub_seed(seed, 1, 0));
    double worst = 0.0;
    for (int j = 0; j < 100; ++j) {
        const CMatrix x = random_gaussian(D, D, rng);
        for (std::size_t n = 1; n < space.total_dim(); ++n) {
            const auto [r1, r2] = polarization_check(space, x, n);
            worst = std::max({worst, r1, r2});
        }
    }
    return {{"polarization", "seed=" + std::to_string(seed) + " D=" + std::to_string(D) + " draws=100", worst,
             worst <= 1e-12}};
}

inline std::vector<CheckLine> verify_product(std::uint64_t seed, const EnergyFunction& ef) {
    const auto small = build_truncated_space(SpectrumModel::u1_current(), 3);  // D = 7
    const auto D = static_cast<Eigen::Index>(small.total_dim());
    std::vector<CheckLine> lines;
    for (double delta : {0.2, 1.0}) {
        std::mt19937_64 rng(sub_seed(seed, 2, static_cast<std::uint64_t>(delta * 1000)));
        const auto th = assemble_theta(small, ef, delta);
        double worst = 0.0;
        for (int j = 0; j < 100; ++j) {
            const CMatrix x = random_gaussian(D, D, rng), y = random_gaussian(D, D, rng);
            const cplx lhs = theta_difference(small, th, x, y);
            const cplx rhs = theta_direct(small, ef, delta, x, y);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, x.operatorNorm() * y.operatorNorm()));
        }
        lines.push_back({"product", "seed=" + std::to_string(seed) + " delta=" + fmt(delta) + " D=" +
                                        std::to_string(D) + " draws=100",
                         worst, worst <= 1e-10});
    }
    return lines;
}

inline std::vector<CheckLine> verify_spectral(std::uint64_t seed, const EnergyFunction& ef) {
    std::vector<CheckLine> lines;
    for (double delta : {0.1, 0.3, 1.0}) {
        double worst = 0.0;
        for (std::uint64_t j = 0; j < 20; ++j) {
            const auto pair = make_synthetic_pair(delta, 128, sub_seed(seed, 3, j));
            worst = std::max(worst, verify_spectral_identity(ef, pair) / pair.l1_mass());
        }
        lines.push_back({"spectral", "seed=" + std::to_string(seed) + " delta=" + fmt(delta) + " pairs=20", worst,
                         worst <= 1e-5});
    }
    return lines;
}

inline std::vector<CheckLine> verify_concavity(std::uint64_t seed, const RunConfig& c, const EnergyFunction& ef) {
    std::vector<CheckLine> lines;
    const auto model = build_model(c);
    for (std::size_t E : c.Es) {
        BigInt D = 0;
        for (const auto& d : model.dims(E)) D += d;
        if (D > c.oracle_limit) continue;
        const auto space = build_truncated_space(model, E, c.oracle_limit);
        for (double delta : c.deltas) {
            if (delta * static_cast<double>(E) > ef.t_max()) continue;
            const auto r = oracle_vs_bounds(space, ef, delta, c.oracle_limit);
            const auto caps = cutoff_caps(space.dims, ef, E);
            const bool chain = r.scaled_entropy <= caps.HE_bound + 1e-9;
            lines.push_back({"concavity_oracle", model.id() + " E=" + std::to_string(E) + " delta=" + fmt(delta), r.gap,
                             r.pass && chain});
        }
    }
    // random non-orthogonal ensembles
    std::mt19937_64 rng(sub_seed(seed, 4, 0));
    double worst = std::numeric_limits<double>::infinity();
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int j = 0; j < 100; ++j) {
        WeightedPureEnsemble ens(6);
        for (int k = 0; k < 10; ++k) ens.add(uni(rng), random_unit_vector(6, rng));
        worst = std::min(worst, ensemble_entropy_bound(ens) - von_neumann_entropy(assemble_density(ens)));
    }
    lines.push_back({"concavity_random", "seed=" + std::to_string(seed) + " dim=6 vectors=10 draws=100", worst,
                     worst >= -1e-9});
    return lines;
}

inline std::vector<CheckLine> verify_trace(const RunConfig& c) {
    std::vector<CheckLine> lines;
    for (const auto& model : {SpectrumModel::u1_current(), SpectrumModel::virasoro_vacuum()}) {
        const auto fit = fit_growth_constants(model, c.kappa, c.fit_n_max);
        for (const auto& t : verify_trace_bound(model, fit, c.betas))
            lines.push_back({"trace_bound", model.id() + " kappa=" + fmt(c.kappa) + " beta=" + fmt(t.beta),
                             t.bound - t.trace, t.pass});
    }
    return lines;
}

inline std::vector<CheckLine> verify_quasinorm(std::uint64_t seed, const RunConfig& c) {
    std::vector<CheckLine> lines;
    for (double p : c.ps) {
        double worst = std::numeric_limits<double>::infinity();
        bool ok = true;
        for (std::uint64_t j = 0; j < 50; ++j) {
            const auto r = quasinorm_property_check(sub_seed(seed, 5, j), p);
            ok = ok && r.pass;
            worst = std::min({worst, r.subadditivity, r.ideal, r.family});
        }
        lines.push_back({"quasinorm", "seed=" + std::to_string(seed) + " p=" + fmt(p) + " instances=50", worst, ok});
    }
    return lines;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out) {
    auto enabled = [&](const std::string& s) {
        return c.only.empty() || std::find(c.only.begin(), c.only.end(), s) != c.only.end();
    };
    std::optional<EnergyFunction> ef;
    if (enabled("product") || enabled("spectral") || enabled("concavity")) ef = build_energy(c);
    out << "check_name,param_summary,residual_or_gap,pass\n";
    bool ok = true;
    auto emit = [&](const std::vector<CheckLine>& lines) {
        for (const auto& l : lines) {
            ok = ok && l.pass;
            out << l.name << ',' << l.params << ',' << fmt(l.value) << ',' << (l.pass ? 1 : 0) << '\n';
        }
    };
    for (std::uint64_t seed : c.seeds) {
        if (enabled("polarization")) emit(verify_polarization(seed));
        if (enabled("product")) emit(verify_product(seed, *ef));
        if (enabled("spectral")) emit(verify_spectral(seed, *ef));
        if (enabled("concavity")) emit(verify_concavity(seed, c, *ef));
        if (enabled("trace")) emit(verify_trace(c));
        if (enabled("quasinorm")) emit(verify_quasinorm(seed, c));
    }
    return ok ? kOk : kVerifyFailed;
}

}  // namespace entbound::cli
