// Acceptance runner: executes the validation criteria and reports one line
// per criterion. Exit code 0 when everything passed, 1 otherwise.
//
//   acceptance [--level quick|full] [--seed N] [--criteria 1,4,9] [--workers N]

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "stperc/validate.hpp"

namespace {

[[noreturn]] void usage(const char* argv0) {
    std::fprintf(stderr,
                 "usage: %s [--level quick|full] [--seed N] [--criteria i,j,...] "
                 "[--workers N]\n",
                 argv0);
    std::exit(2);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace stperc;

    ValidationLevel level = ValidationLevel::Full;
    uint64_t seed = kDefaultValidationSeed;
    int workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<int> subset;

    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        const auto value = [&]() -> std::string {
            if (i + 1 >= argc) usage(argv[0]);
            return argv[++i];
        };
        if (arg == "--level") {
            const std::string v = value();
            if (v == "quick")
                level = ValidationLevel::Quick;
            else if (v == "full")
                level = ValidationLevel::Full;
            else
                usage(argv[0]);
        } else if (arg == "--seed") {
            seed = std::strtoull(value().c_str(), nullptr, 10);
        } else if (arg == "--workers") {
            workers = std::atoi(value().c_str());
            if (workers < 1) usage(argv[0]);
        } else if (arg == "--criteria") {
            const std::string list = value();
            size_t pos = 0;
            while (pos < list.size()) {
                size_t next = list.find(',', pos);
                if (next == std::string::npos) next = list.size();
                subset.push_back(std::atoi(list.substr(pos, next - pos).c_str()));
                pos = next + 1;
            }
        } else {
            usage(argv[0]);
        }
    }

    std::printf("acceptance: level=%s seed=%llu workers=%d\n",
                level == ValidationLevel::Quick ? "quick" : "full",
                static_cast<unsigned long long>(seed), workers);
    std::fflush(stdout);

    const ValidationReport report = run_acceptance(level, seed, workers, subset);

    int failed = 0;
    for (const CriterionResult& r : report.results) {
        std::printf("[%s] criterion %d: %s (%s) [%.1fs]\n", r.passed ? "PASS" : "FAIL",
                    r.index, r.name.c_str(), r.detail.c_str(), r.seconds);
        std::fflush(stdout);
        if (!r.passed) ++failed;
    }
    std::printf("%zu criteria, %d failed\n", report.results.size(), failed);
    return failed == 0 ? 0 : 1;
}
