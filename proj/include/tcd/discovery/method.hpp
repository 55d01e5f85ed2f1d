#pragma once

#include "tcd/core/scene.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tcd::discovery {

enum class MethodId { Pwgc, Mvgc, VarLingam, Timino, Pcmci, Dynotears, Random };

/// Identifiers accepted on the command line, in canonical order.
const std::vector<std::string>& method_names();
std::string_view to_string(MethodId id);
/// Throws InvalidArgument listing the valid identifiers.
MethodId parse_method(std::string_view name);

/// Significance level, maximum lag in samples and per-method extras
/// (e.g. "lambda_a", "threshold_a", "max_iterations", "edge_probability").
struct MethodConfig {
    double alpha = 0.05;
    int max_lag = 25;
    std::map<std::string, double> params;

    double param(const std::string& key, double fallback) const;
    void validate() const;
};

struct EdgeDiagnostic {
    std::string source;
    std::string target;
    int lag = 0;  ///< 0 when the value summarises all lags
    double value = 0.0;
    std::string kind;  ///< "p_value", "max_abs_coefficient", ...
};

struct DiscoveryOutcome {
    SummaryGraph graph;
    std::optional<LaggedCoefficients> lagged;
    std::vector<EdgeDiagnostic> diagnostics;
    std::vector<std::string> notes;
    bool abstained = false;
};

DiscoveryOutcome pwgc_discover(const TimeSeriesScene& scene, const MethodConfig& config);
DiscoveryOutcome mvgc_discover(const TimeSeriesScene& scene, const MethodConfig& config);
DiscoveryOutcome varlingam_discover(const TimeSeriesScene& scene, const MethodConfig& config);
DiscoveryOutcome timino_discover(const TimeSeriesScene& scene, const MethodConfig& config);
DiscoveryOutcome pcmci_discover(const TimeSeriesScene& scene, const MethodConfig& config);
DiscoveryOutcome dynotears_discover(const TimeSeriesScene& scene, const MethodConfig& config);
DiscoveryOutcome random_discover(const TimeSeriesScene& scene, const MethodConfig& config, std::uint64_t seed);

/// Dispatch by identifier. `seed` is only consumed by randomized methods.
DiscoveryOutcome discover(MethodId method, const TimeSeriesScene& scene, const MethodConfig& config,
                          std::uint64_t seed = 0);

namespace detail {
/// Throws InvalidArgument unless T exceeds `min_rows`.
void require_samples(const TimeSeriesScene& scene, Eigen::Index min_rows, std::string_view method);
}  // namespace detail

}  // namespace tcd::discovery
