#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace survscore::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Bad flag combination or value; exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string input;
    std::string predictions;
    std::string truth;
    std::string out;
    std::string report;
    std::string predictions_out;
    std::string test_out;
    std::string rule = "cen-log";
    std::string method = "ir";
    std::string group_col;
    std::optional<std::size_t> bins;
    std::uint64_t seed = 0;
    double lr = 1e-3;
    std::size_t epochs = 300;
    std::size_t ir_max_iters = 20;
    double ir_tol = 1e-4;
    double fallback_w = 1.0;
    double z_inf_factor = 1.05;
    std::optional<double> grid_max;
    std::size_t n = 1000;
    std::size_t perturbations = 500;
    double scale = 0.5;
    double tolerance = 1e-10;
    bool corrupt_weights = false;

    nlohmann::json to_json() const;
};

struct MetricsBlock {
    double mean_cen_log_simple = 0.0;
    double d_calibration = 0.0;
    double km_calibration = 0.0;
    std::size_t flagged = 0;

    bool operator==(const MetricsBlock&) const = default;
};

struct FitBlock {
    std::size_t outer_iters = 0;
    bool converged = false;
    double final_loss = 0.0;
    std::size_t flagged = 0;
    std::size_t epochs_run = 0;
    std::vector<double> max_cdf_change;
    std::optional<std::size_t> diverged_at;

    bool operator==(const FitBlock&) const = default;
};

struct RunReport {
    std::string command;
    std::string version;
    std::uint64_t seed = 0;
    nlohmann::json config = nlohmann::json::object();
    std::optional<MetricsBlock> metrics;
    std::optional<FitBlock> fit;
    /// Command-specific results (properness sweep, KM curve, oracle values).
    nlohmann::json details = nlohmann::json::object();
    double wall_clock_seconds = 0.0;
    int exit_code = kExitOk;

    bool operator==(const RunReport&) const = default;
};

/// Non-finite numbers are written as the strings "inf", "-inf" and "nan" so
/// that they survive a round trip.
nlohmann::json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);
std::string serialize_report(const RunReport& report);

std::string tool_version();

RunReport run_simulate(const RunConfig& cfg);
RunReport run_train(const RunConfig& cfg);
RunReport run_eval(const RunConfig& cfg);
RunReport run_properness(const RunConfig& cfg);
RunReport run_km(const RunConfig& cfg);

/// Full command line: parses flags, runs the subcommand, writes the report,
/// maps errors to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace survscore::app
