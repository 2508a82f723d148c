#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dhym::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSelftest = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitRefused = 3;
inline constexpr int kExitSolver = 4;
inline constexpr int kExitInvariant = 5;

// Precedence: config file < --set overrides < dedicated flags.
struct RunArgs {
    std::string config;
    std::vector<std::string> overrides;
    std::string output;
};

struct PhaseArgs {
    std::string lambda;
    std::string alpha;
    std::string omega;
    std::optional<double> sigma;
};

struct SubsolutionArgs {
    RunArgs run;
    std::string mu;
    std::optional<double> h;
    std::optional<int> p;
};

struct StabilityArgs {
    std::string classdata;
    RunArgs run;
};

struct SelftestArgs {
    std::uint64_t seed = 0;
    int samples = 1000;
};

int cmd_phase_eval(const PhaseArgs& args);
int cmd_subsolution(const SubsolutionArgs& args);
int cmd_solve(const RunArgs& args);
int cmd_continuity(const RunArgs& args);
int cmd_stability(const StabilityArgs& args);
int cmd_selftest(const SelftestArgs& args);

}  // namespace dhym::cli
