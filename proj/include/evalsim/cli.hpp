#ifndef EVALSIM_CLI_HPP_
#define EVALSIM_CLI_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evalsim/profile.hpp"

namespace evalsim::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericalError = 3;

struct SimulateConfig {
    std::string model_path;
    std::size_t voters = 0;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string positions_path;  // spatial models only; empty skips it
    bool transpose = false;
    bool repair_correlation = false;  // accept semidefinite copula matrices
    unsigned threads = 1;
};

struct FitConfig {
    std::string in_path;
    std::string out_path;
    std::string hist_path;  // per-candidate bin table TSV; empty skips it
    std::optional<Scale> scale;
    std::vector<std::string> families;
    std::string copula = "gaussian";  // or "checkerboard"
    int checkerboard_cells = 40;      // B
    std::optional<int> histogram_classes;  // G
    int hist_bins = 40;               // bins for --hist output
    double level = 0.05;
    bool paper_estimator = false;
    bool jitter = false;
    std::uint64_t seed = 0;
};

struct EmbedConfig {
    std::string in_path;
    std::size_t dim = 2;
    std::string positions_path;
    std::string report_path;
    std::optional<Scale> scale;
    std::string inverse_link;  // "", "linear:<ell>" or "sigmoid:<lambda>,<beta>"
    std::string refit;         // "", "gaussian" or "mixture:<k>"
    std::size_t max_iterations = 500;
    double epsilon = 1e-6;
    std::uint64_t seed = 0;
};

struct ElectConfig {
    std::string in_path;
    std::string rule;      // "range", "mj" or "approval:<t>"
    std::string out_path;  // empty writes to stdout
    std::optional<Scale> scale;
};

struct SummaryConfig {
    std::string in_path;
    std::string out_path;  // empty writes to stdout
    std::optional<Scale> scale;
};

// "auto" -> nullopt, "continuous", or "discrete:<K>".
std::optional<Scale> parse_scale(const std::string& text);

int run_simulate(const SimulateConfig& config);
int run_fit(const FitConfig& config);
int run_embed(const EmbedConfig& config);
int run_elect(const ElectConfig& config);
int run_summary(const SummaryConfig& config);

}  // namespace evalsim::cli

#endif  // EVALSIM_CLI_HPP_
