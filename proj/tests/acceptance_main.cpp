#include "mixedvol/acceptance.hpp"

#include <cstdio>

int main() {
    using namespace mixedvol::acceptance;
    const auto results = run_all();
    int passed = 0;
    for (const auto& r : results) {
        std::printf("%s\n", format(r).c_str());
        passed += r.passed ? 1 : 0;
    }
    const bool ok = acceptable(results);
    std::printf("%d/%zu criteria pass%s\n", passed, results.size(),
                ok ? (passed == static_cast<int>(results.size()) ? "" : "; remaining failures are known")
                   : "; unexpected failure");
    return ok ? 0 : 2;
}
