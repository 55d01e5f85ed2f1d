#include "common.hpp"

#include <random>

namespace tcd::discovery {

DiscoveryOutcome random_discover(const TimeSeriesScene& scene, const MethodConfig& config, std::uint64_t seed) {
    const double prob = config.param("edge_probability", 0.5);
    if (!(prob >= 0.0 && prob <= 1.0)) throw InvalidArgument("random: edge_probability must lie in [0, 1]");
    std::mt19937_64 rng(seed);
    auto out = detail::empty_outcome(scene);
    const Eigen::Index nv = scene.num_variables();
    for (Eigen::Index s = 0; s < nv; ++s) {
        for (Eigen::Index t = 0; t < nv; ++t) {
            if (s == t) continue;
            // 53 high bits as a uniform in [0, 1); portable across standard libraries.
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (u < prob) detail::add_edge(out, scene, s, t);
        }
    }
    return out;
}

}  // namespace tcd::discovery
