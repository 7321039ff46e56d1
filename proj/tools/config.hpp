#pragma once

#include "mixedvol/errors.hpp"
#include "mixedvol/mixed.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mixedvol::cli {

// Thrown for malformed or out-of-domain configuration files.
class ConfigError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "config"; }
};

struct ModelConfig {
    std::string model = "heston";  // heston | heston+kou | heston+nig
    HestonParams heston;
    bool risk_neutral = true;  // drift "risk_neutral" instead of a number
    KouJumpParams kou;
    NIGParams nig;
    std::uint64_t seed = 20261017;
    double rel_tol = 1e-9;
    double acceptance_scale = 1.0;
    std::uint64_t sample_paths = 100000;
    int sample_steps = 200;
    std::uint64_t acceptance_paths = 1000000;
    int acceptance_steps = 200;
    std::vector<int> criteria;  // empty: all
    std::string out;            // default output path, "" for stdout

    /// The configured model, with the martingale drift installed when requested.
    MixedModel build() const;
};

ModelConfig parse_config(const nlohmann::json& j);
ModelConfig load_config(const std::string& path);

struct Grid {
    double a = 0.0, b = 0.0;
    int n = 0;
    bool log = false;
    std::vector<double> points() const;
};

/// "a:b:n" (linear) or "a:b:n(log)".
Grid parse_grid(const std::string& spec);

}  // namespace mixedvol::cli
