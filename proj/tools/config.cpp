#include "config.hpp"

#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace mixedvol::cli {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [k, v] : j.items()) {
        if (!allowed.count(k)) throw ConfigError(where + ": unknown key \"" + k + "\"");
    }
}

double number(const json& j, const std::string& where, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where + "." + key + ": must be finite");
    return x;
}

std::uint64_t count(const json& j, const std::string& where, const std::string& key, std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_unsigned()) throw ConfigError(where + "." + key + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
}

}  // namespace

MixedModel ModelConfig::build() const {
    MixedModel m = model == "heston+kou"   ? MixedModel::heston_kou(heston, kou)
                   : model == "heston+nig" ? MixedModel::heston_nig(heston, nig)
                                           : MixedModel::heston_only(heston);
    return risk_neutral ? m.risk_neutral() : m;
}

ModelConfig parse_config(const json& j) {
    only_keys(j, "config", {"model", "heston", "kou", "nig", "seed", "tolerances", "simulation", "acceptance", "output"});
    ModelConfig c;
    if (!j.contains("model") || !j.at("model").is_string()) throw ConfigError("config.model: required string");
    c.model = j.at("model").get<std::string>();
    if (c.model != "heston" && c.model != "heston+kou" && c.model != "heston+nig") {
        throw ConfigError("config.model: expected heston, heston+kou or heston+nig, got \"" + c.model + "\"");
    }

    const json h = j.value("heston", json::object());
    only_keys(h, "heston", {"a", "b", "c", "rho", "y0", "x0", "t", "mu"});
    c.heston.a = number(h, "heston", "a", c.heston.a);
    c.heston.b = number(h, "heston", "b", c.heston.b);
    c.heston.c = number(h, "heston", "c", c.heston.c);
    c.heston.rho = number(h, "heston", "rho", c.heston.rho);
    c.heston.y0 = number(h, "heston", "y0", c.heston.y0);
    c.heston.x0 = number(h, "heston", "x0", c.heston.x0);
    c.heston.t = number(h, "heston", "t", c.heston.t);
    if (h.contains("mu")) {
        const auto& mu = h.at("mu");
        if (mu.is_string()) {
            if (mu.get<std::string>() != "risk_neutral") throw ConfigError("heston.mu: expected a number or \"risk_neutral\"");
            c.risk_neutral = true;
        } else {
            c.heston.mu = number(h, "heston", "mu", 0.0);
            c.risk_neutral = false;
        }
    }
    c.heston.validate();

    const bool kou = c.model == "heston+kou", nig = c.model == "heston+nig";
    if (j.contains("kou") && !kou) throw ConfigError("config.kou: only valid with model heston+kou");
    if (j.contains("nig") && !nig) throw ConfigError("config.nig: only valid with model heston+nig");
    if (kou) {
        if (!j.contains("kou")) throw ConfigError("config.kou: required for model heston+kou");
        const json& k = j.at("kou");
        only_keys(k, "kou", {"lambda", "eta1", "eta2", "p", "q"});
        c.kou.lambda = number(k, "kou", "lambda", c.kou.lambda);
        c.kou.eta1 = number(k, "kou", "eta1", c.kou.eta1);
        c.kou.eta2 = number(k, "kou", "eta2", c.kou.eta2);
        c.kou.p = number(k, "kou", "p", c.kou.p);
        c.kou.q = number(k, "kou", "q", 1.0 - c.kou.p);
        c.kou.t = c.heston.t;
        c.kou.validate();
    }
    if (nig) {
        if (!j.contains("nig")) throw ConfigError("config.nig: required for model heston+nig");
        const json& n = j.at("nig");
        only_keys(n, "nig", {"alpha", "delta"});
        c.nig.alpha = number(n, "nig", "alpha", c.nig.alpha);
        c.nig.delta = number(n, "nig", "delta", c.nig.delta);
        c.nig.t = c.heston.t;
        c.nig.validate();
    }

    c.seed = count(j, "config", "seed", c.seed);
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        only_keys(t, "tolerances", {"rel", "acceptance_scale"});
        c.rel_tol = number(t, "tolerances", "rel", c.rel_tol);
        c.acceptance_scale = number(t, "tolerances", "acceptance_scale", c.acceptance_scale);
        if (!(c.rel_tol > 0.0 && c.rel_tol < 1.0)) throw ConfigError("tolerances.rel: must lie in (0, 1)");
        if (!(c.acceptance_scale > 0.0)) throw ConfigError("tolerances.acceptance_scale: must be positive");
    }
    if (j.contains("simulation")) {
        const json& s = j.at("simulation");
        only_keys(s, "simulation", {"paths", "steps"});
        c.sample_paths = count(s, "simulation", "paths", c.sample_paths);
        c.sample_steps = static_cast<int>(count(s, "simulation", "steps", static_cast<std::uint64_t>(c.sample_steps)));
        if (c.sample_paths < 2 || c.sample_steps < 1) throw ConfigError("simulation: need paths >= 2 and steps >= 1");
    }
    if (j.contains("acceptance")) {
        const json& a = j.at("acceptance");
        only_keys(a, "acceptance", {"paths", "steps", "criteria"});
        c.acceptance_paths = count(a, "acceptance", "paths", c.acceptance_paths);
        c.acceptance_steps =
            static_cast<int>(count(a, "acceptance", "steps", static_cast<std::uint64_t>(c.acceptance_steps)));
        if (c.acceptance_paths < 2 || c.acceptance_steps < 1) throw ConfigError("acceptance: need paths >= 2 and steps >= 1");
        if (a.contains("criteria")) {
            if (!a.at("criteria").is_array()) throw ConfigError("acceptance.criteria: expected an array");
            for (const auto& v : a.at("criteria")) {
                if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > 12) {
                    throw ConfigError("acceptance.criteria: entries must be integers in 1..12");
                }
                c.criteria.push_back(v.get<int>());
            }
        }
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        only_keys(o, "output", {"path"});
        if (o.contains("path")) {
            if (!o.at("path").is_string()) throw ConfigError("output.path: expected a string");
            c.out = o.at("path").get<std::string>();
        }
    }
    return c;
}

ModelConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    return parse_config(j);
}

std::vector<double> Grid::points() const {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        out.push_back(log ? a * std::pow(b / a, f) : a + (b - a) * f);
    }
    return out;
}

Grid parse_grid(const std::string& spec) {
    static const std::regex re(R"(^\s*([^:]+):([^:]+):(\d+)\s*(\(log\))?\s*$)");
    std::smatch m;
    if (!std::regex_match(spec, m, re)) throw ConfigError("grid \"" + spec + "\": expected a:b:n or a:b:n(log)");
    Grid g;
    try {
        std::size_t used = 0;
        g.a = std::stod(m[1].str(), &used);
        if (used != m[1].str().size()) throw std::invalid_argument("a");
        g.b = std::stod(m[2].str(), &used);
        if (used != m[2].str().size()) throw std::invalid_argument("b");
        g.n = std::stoi(m[3].str());
    } catch (const std::exception&) {
        throw ConfigError("grid \"" + spec + "\": bounds must be numbers");
    }
    g.log = m[4].matched;
    if (g.n < 1) throw ConfigError("grid: n must be at least 1");
    if (!std::isfinite(g.a) || !std::isfinite(g.b)) throw ConfigError("grid: bounds must be finite");
    if (g.log && !(g.a > 0.0 && g.b > 0.0)) throw ConfigError("grid: log-spaced grids need positive bounds");
    return g;
}

}  // namespace mixedvol::cli
