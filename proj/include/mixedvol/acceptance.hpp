#pragma once

#include "mixedvol/heston.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mixedvol::acceptance {

struct Options {
    HestonParams heston;             // reference set by default
    std::uint64_t seed = 20261017;
    std::uint64_t mc_paths = 1000000;
    int mc_steps = 200;
    // Multiplies every pass tolerance; values below 1 tighten the suite.
    double tolerance_scale = 1.0;
    bool enforce_runtime = true;
};

struct Result {
    int id = 0;
    std::string name;
    bool passed = false;
    // Failure recorded as unattainable for this parameter set; still reported as FAIL.
    bool known_failure = false;
    std::string measured;  // key=value pairs
    double seconds = 0.0;
    double budget_seconds = 0.0;
};

/// Runs one criterion (1..12). Domain errors inside a criterion are caught and
/// turn into a failure carrying the message.
Result run(int id, const Options& opt = {});
std::vector<Result> run_all(const Options& opt = {});

/// "PASS" / "FAIL" line with the measured constants.
std::string format(const Result& r);

/// True when every failure in the list is a known one.
bool acceptable(const std::vector<Result>& results);

}  // namespace mixedvol::acceptance
