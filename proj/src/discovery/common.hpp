#pragma once

#include "tcd/core/error.hpp"
#include "tcd/discovery/method.hpp"

#include <numeric>
#include <vector>

namespace tcd::discovery::detail {

inline std::vector<Eigen::Index> all_indices(Eigen::Index n) {
    std::vector<Eigen::Index> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), Eigen::Index{0});
    return v;
}

inline DiscoveryOutcome empty_outcome(const TimeSeriesScene& scene) {
    DiscoveryOutcome out;
    out.graph = SummaryGraph(scene.variable_names());
    return out;
}

inline EdgeDiagnostic diag(const TimeSeriesScene& scene, Eigen::Index source, Eigen::Index target, int lag,
                           double value, const char* kind) {
    const auto& names = scene.variable_names();
    return EdgeDiagnostic{names[static_cast<std::size_t>(source)], names[static_cast<std::size_t>(target)], lag,
                          value, kind};
}

inline void add_edge(DiscoveryOutcome& out, const TimeSeriesScene& scene, Eigen::Index source, Eigen::Index target) {
    const auto& names = scene.variable_names();
    out.graph.add_edge(names[static_cast<std::size_t>(source)], names[static_cast<std::size_t>(target)]);
}

}  // namespace tcd::discovery::detail
