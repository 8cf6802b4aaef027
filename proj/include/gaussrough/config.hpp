#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gaussrough/covariance.hpp"
#include "gaussrough/errors.hpp"
#include "gaussrough/fourier.hpp"

namespace gaussrough::harness {

// ---------------------------------------------------------------------------
// Structured-text config: [section] blocks of key = value lines
// ---------------------------------------------------------------------------

class Config {
  public:
    using Section = std::map<std::string, std::string>;

    static Config parse(const std::string& text) {
        Config cfg;
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("config line " + std::to_string(lineno) + ": bad section");
                section = trim(line.substr(1, line.size() - 2));
                cfg.sections_[section]; // create
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos || section.empty())
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": expected key = value inside a section");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
            cfg.sections_[section][key] = value;
        }
        return cfg;
    }

    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    bool has_section(const std::string& s) const { return sections_.count(s) > 0; }

    const Section& section(const std::string& s) const {
        const auto it = sections_.find(s);
        if (it == sections_.end()) throw ConfigError("missing config section [" + s + "]");
        return it->second;
    }

    std::optional<std::string> get(const std::string& s, const std::string& key) const {
        const auto it = sections_.find(s);
        if (it == sections_.end()) return std::nullopt;
        const auto kit = it->second.find(key);
        if (kit == it->second.end()) return std::nullopt;
        return kit->second;
    }

    double get_num(const std::string& s, const std::string& key, double fallback) const {
        const auto v = get(s, key);
        return v ? parse_num(*v, s + "." + key) : fallback;
    }

    std::int64_t get_int(const std::string& s, const std::string& key, std::int64_t fallback) const {
        const auto v = get(s, key);
        if (!v) return fallback;
        return static_cast<std::int64_t>(parse_num(*v, s + "." + key));
    }

    std::string get_str(const std::string& s, const std::string& key, std::string fallback) const {
        const auto v = get(s, key);
        return v ? *v : std::move(fallback);
    }

    /// Rejects keys outside the allowed set; params.* keys pass when the
    /// wildcard "params.*" is allowed.
    void validate_section(const std::string& s, const std::set<std::string>& allowed) const {
        const auto it = sections_.find(s);
        if (it == sections_.end()) return;
        for (const auto& [key, value] : it->second) {
            (void)value;
            if (allowed.count(key)) continue;
            if (allowed.count("params.*") && key.rfind("params.", 0) == 0) continue;
            throw ConfigError("unknown key '" + key + "' in section [" + s + "]");
        }
    }

    void validate_known() const {
        static const std::set<std::string> model_keys = {"kind", "domain", "rho",
                                                         "tail_tol", "max_terms", "params.*"};
        static const std::set<std::string> coeffs_keys = {"rule", "kmax", "params.*"};
        static const std::set<std::string> grid_keys = {"n", "lo", "hi"};
        static const std::set<std::string> mc_keys = {"paths", "seed"};
        static const std::set<std::string> exp_keys = {
            "name",  "alpha", "bc",     "modes", "beta", "q",    "gamma", "rho",
            "level", "theta", "n_list", "taus",  "eps",  "mode", "region", "grid_n",
            "squares", "base", "segments", "horizon", "out"};
        validate_section("model", model_keys);
        validate_section("coeffs", coeffs_keys);
        validate_section("grid", grid_keys);
        validate_section("mc", mc_keys);
        validate_section("experiment", exp_keys);
        for (const auto& [name, kv] : sections_) {
            (void)kv;
            static const std::set<std::string> known = {"model", "coeffs", "grid", "mc",
                                                        "experiment"};
            if (!known.count(name)) throw ConfigError("unknown config section [" + name + "]");
        }
    }

    const std::map<std::string, Section>& sections() const { return sections_; }

    static double parse_num(const std::string& v, const std::string& where) {
        std::size_t pos = 0;
        double out = 0.0;
        try {
            out = std::stod(v, &pos);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse number '" + v + "' for " + where);
        }
        if (pos != v.size()) throw ConfigError("trailing junk in number '" + v + "' for " + where);
        return out;
    }

    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

  private:
    std::map<std::string, Section> sections_;
};

// ---------------------------------------------------------------------------
// Model construction from key/value specifications
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> split_nums(const std::string& s, const std::string& where) {
    std::vector<double> out;
    std::string token;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!token.empty()) {
                out.push_back(Config::parse_num(token, where));
                token.clear();
            }
        } else {
            token += c;
        }
    }
    if (!token.empty()) out.push_back(Config::parse_num(token, where));
    return out;
}

} // namespace detail

/// Builds a catalog model from a flat key/value map: kind plus params.*,
/// optional domain, rho override and truncation policy.
inline cov::CovarianceModel build_model(const std::map<std::string, std::string>& kv) {
    const auto find = [&](const std::string& k) -> std::optional<std::string> {
        const auto it = kv.find(k);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    const auto num = [&](const std::string& k, std::optional<double> fallback =
                                                   std::nullopt) -> double {
        const auto v = find(k);
        if (!v) {
            if (fallback) return *fallback;
            throw ConfigError("model spec: missing required key '" + k + "'");
        }
        return Config::parse_num(*v, k);
    };

    const auto kind_opt = find("kind");
    if (!kind_opt) throw ConfigError("model spec: missing 'kind'");
    const std::string kind = *kind_opt;

    std::optional<cov::Interval> domain;
    if (const auto d = find("domain")) {
        const auto nums = detail::split_nums(*d, "domain");
        if (nums.size() != 2) throw ConfigError("model spec: domain needs two numbers");
        domain = cov::Interval(nums[0], nums[1]);
    }
    cov::TruncationPolicy policy;
    if (const auto t = find("tail_tol")) policy.tail_tol = Config::parse_num(*t, "tail_tol");
    if (const auto t = find("max_terms"))
        policy.max_terms = static_cast<std::int64_t>(Config::parse_num(*t, "max_terms"));

    cov::CovarianceModel m;
    if (kind == "fbm") {
        m = cov::CovarianceModel::fbm(num("params.H"), domain.value_or(cov::Interval{0.0, 1.0}));
    } else if (kind == "brownian_bridge") {
        m = cov::CovarianceModel::brownian_bridge(num("params.T", 1.0));
    } else if (kind == "ou") {
        m = cov::CovarianceModel::ou(num("params.lambda", 1.0),
                                     domain.value_or(cov::Interval{0.0, 1.0}));
    } else if (kind == "fractional_ou") {
        m = cov::CovarianceModel::fractional_ou(num("params.H"), num("params.lambda", 1.0),
                                                domain.value_or(cov::Interval{0.0, 1.0}));
    } else if (kind == "bifbm") {
        m = cov::CovarianceModel::bifbm(num("params.H"), num("params.K"),
                                        domain.value_or(cov::Interval{0.0, 1.0}));
    } else if (kind == "rfs") {
        const double exponent = num("params.exponent");
        const auto kmax = static_cast<std::int64_t>(num("params.kmax", 4e6));
        m = cov::CovarianceModel::rfs(fourier::CoefficientSequence::power_law(exponent, kmax),
                                      policy,
                                      domain.value_or(cov::Interval{0.0, fourier::two_pi}));
    } else if (kind == "she_dirichlet") {
        m = cov::CovarianceModel::she_dirichlet(num("params.alpha"), policy);
    } else if (kind == "she_periodic") {
        m = cov::CovarianceModel::she_periodic(num("params.alpha"), num("params.lambda", 1.0),
                                               num("params.gamma", 0.0), policy);
    } else if (kind == "stationary_f") {
        const std::string f = find("params.F").value_or("pow");
        std::function<double(double)> fn;
        if (f == "pow") {
            const double e = num("params.exponent");
            fn = [e](double x) { return std::pow(x, e); };
        } else if (f == "one_minus_exp") {
            fn = [](double x) { return 1.0 - std::exp(-x); };
        } else if (f == "square") {
            fn = [](double x) { return x * x; };
        } else {
            throw ConfigError("stationary_f: unknown F rule '" + f + "'");
        }
        const double rho_hint = num("rho", 0.0);
        m = cov::CovarianceModel::stationary_f(std::move(fn),
                                               domain.value_or(cov::Interval{0.0, 1.0}), rho_hint,
                                               "stationary_f(" + f + ")");
    } else if (kind == "spectral") {
        const std::string density = find("params.density").value_or("fractional_ou");
        fourier::SpectralDensity sd;
        if (density == "fractional_ou") {
            sd = fourier::fractional_ou_density(num("params.H"), num("params.lambda", 1.0));
        } else if (density == "whole_line_heat") {
            sd = fourier::whole_line_heat_density(num("params.alpha"), num("params.lambda", 1.0));
        } else {
            throw ConfigError("spectral: unknown density '" + density + "'");
        }
        m = cov::CovarianceModel::spectral(std::move(sd),
                                           domain.value_or(cov::Interval{0.0, 1.0}));
    } else {
        throw UnknownKindError("model spec: unknown kind '" + kind + "'");
    }
    m.trunc = policy;
    if (const auto r = find("rho")) {
        const double rho = Config::parse_num(*r, "rho");
        if (rho >= 1.0) m.nominal_rho = rho;
    }
    return m;
}

inline cov::CovarianceModel build_model(const Config& cfg) {
    if (!cfg.has_section("model")) throw ConfigError("config: missing [model] section");
    return build_model(cfg.section("model"));
}

/// Compact model string, e.g. "fbm:H=0.3" or "bifbm:H=0.6,K=0.7,domain=0 1".
inline cov::CovarianceModel parse_model_string(const std::string& spec) {
    std::map<std::string, std::string> kv;
    const auto colon = spec.find(':');
    kv["kind"] = spec.substr(0, colon == std::string::npos ? spec.size() : colon);
    if (colon != std::string::npos) {
        std::string rest = spec.substr(colon + 1);
        std::string token;
        std::vector<std::string> tokens;
        for (char c : rest) {
            if (c == ',') {
                tokens.push_back(token);
                token.clear();
            } else {
                token += c;
            }
        }
        if (!token.empty()) tokens.push_back(token);
        for (const auto& t : tokens) {
            const auto eq = t.find('=');
            if (eq == std::string::npos) throw ConfigError("model string: expected key=value in '" + t + "'");
            const std::string key = Config::trim(t.substr(0, eq));
            const std::string value = Config::trim(t.substr(eq + 1));
            static const std::set<std::string> toplevel = {"domain", "rho", "tail_tol",
                                                           "max_terms"};
            kv[toplevel.count(key) ? key : "params." + key] = value;
        }
    }
    return build_model(kv);
}

/// Coefficient sequence from a [coeffs] section: named rule + parameters.
inline fourier::CoefficientSequence build_coeffs(const Config& cfg) {
    const std::string rule = cfg.get_str("coeffs", "rule", "power");
    const auto kmax = cfg.get_int("coeffs", "kmax", 1'000'000);
    if (rule == "power") {
        const double exponent = cfg.get_num("coeffs", "params.exponent", 2.0);
        return fourier::CoefficientSequence::power_law(exponent, kmax);
    }
    if (rule == "exp2") { // b_k = exp(-k^2 tau)
        const double tau = cfg.get_num("coeffs", "params.tau", 1.0);
        return fourier::CoefficientSequence(
            [tau](std::int64_t k) {
                const double kk = static_cast<double>(std::llabs(k));
                return std::exp(-kk * kk * tau);
            },
            kmax, 4.0, 1.0);
    }
    if (rule == "alternating") { // (-1)^k / k^2: fails the sign checks on purpose
        return fourier::CoefficientSequence(
            [](std::int64_t k) {
                if (k == 0) return 0.0;
                const double kk = static_cast<double>(std::llabs(k));
                return ((std::llabs(k) % 2 == 0) ? 1.0 : -1.0) / (kk * kk);
            },
            kmax, 2.0, 1.0);
    }
    throw ConfigError("coeffs: unknown rule '" + rule + "'");
}

} // namespace gaussrough::harness
