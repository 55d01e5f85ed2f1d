#include "tcd/discovery/method.hpp"

#include "tcd/core/error.hpp"

#include <array>
#include <cmath>

namespace tcd::discovery {
namespace {

constexpr std::array<std::pair<MethodId, std::string_view>, 7> kIds{{
    {MethodId::Pwgc, "pwgc"},
    {MethodId::Mvgc, "mvgc"},
    {MethodId::VarLingam, "varlingam"},
    {MethodId::Timino, "timino"},
    {MethodId::Pcmci, "pcmci"},
    {MethodId::Dynotears, "dynotears"},
    {MethodId::Random, "random"},
}};

}  // namespace

const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [id, name] : kIds) v.emplace_back(name);
        return v;
    }();
    return names;
}

std::string_view to_string(MethodId id) {
    for (const auto& [k, name] : kIds) {
        if (k == id) return name;
    }
    throw InvalidArgument("unknown method id");
}

MethodId parse_method(std::string_view name) {
    for (const auto& [id, n] : kIds) {
        if (n == name) return id;
    }
    std::string valid;
    for (const auto& n : method_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw InvalidArgument("unknown method '" + std::string(name) + "' (valid: " + valid + ")");
}

double MethodConfig::param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void MethodConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
    if (max_lag < 1) throw InvalidArgument("max_lag must be >= 1");
    for (const auto& [k, v] : params) {
        if (!std::isfinite(v)) throw InvalidArgument("method parameter '" + k + "' is not finite");
    }
}

namespace detail {
void require_samples(const TimeSeriesScene& scene, Eigen::Index min_rows, std::string_view method) {
    if (scene.num_samples() <= min_rows) {
        throw InvalidArgument(std::string(method) + ": needs more than " + std::to_string(min_rows) +
                              " samples for this max_lag (scene '" + scene.scene_id() + "' has " +
                              std::to_string(scene.num_samples()) + ")");
    }
}
}  // namespace detail

DiscoveryOutcome discover(MethodId method, const TimeSeriesScene& scene, const MethodConfig& config,
                          std::uint64_t seed) {
    config.validate();
    switch (method) {
        case MethodId::Pwgc: return pwgc_discover(scene, config);
        case MethodId::Mvgc: return mvgc_discover(scene, config);
        case MethodId::VarLingam: return varlingam_discover(scene, config);
        case MethodId::Timino: return timino_discover(scene, config);
        case MethodId::Pcmci: return pcmci_discover(scene, config);
        case MethodId::Dynotears: return dynotears_discover(scene, config);
        case MethodId::Random: return random_discover(scene, config, seed);
    }
    throw InvalidArgument("unknown method id");
}

}  // namespace tcd::discovery
