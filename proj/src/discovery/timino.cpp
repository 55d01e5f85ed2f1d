#include "common.hpp"

#include "tcd/core/preprocess.hpp"
#include "tcd/stats/correlation.hpp"
#include "tcd/stats/regression.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace tcd::discovery {
namespace {

struct Screen {
    bool all_independent = true;
    double min_p = 1.0;        // smallest clamped p over the tested series
    double min_product = 0.0;  // smallest unclamped Bonferroni product, breaks ties at p = 1
};

// Regress y on lags of `inputs` (must contain y) and test the residual against
// every series in `tested`.
Screen screen(const Matrix& x, Eigen::Index y, const std::vector<Eigen::Index>& inputs,
              const std::vector<Eigen::Index>& tested, int tau, double alpha) {
    const std::array<Eigen::Index, 1> target{y};
    const auto d = lagged_design(x, target, inputs, tau);
    const auto fit = stats::ols_fit(d.design, Vector(d.response.col(0)));
    const Eigen::Index n = fit.residuals.size();
    Screen s;
    s.min_product = std::numeric_limits<double>::infinity();
    for (auto z : tested) {
        const auto r = stats::cross_covariance_independence(fit.residuals, x.col(z).tail(n), tau, alpha);
        s.all_independent = s.all_independent && r.independent;
        s.min_p = std::min(s.min_p, r.test.p_value);
        s.min_product = std::min(s.min_product, r.bonferroni_product);
    }
    if (tested.empty()) s.min_product = std::numeric_limits<double>::infinity();
    return s;
}

}  // namespace

DiscoveryOutcome timino_discover(const TimeSeriesScene& scene, const MethodConfig& config) {
    config.validate();
    const int tau = config.max_lag;
    const Eigen::Index nv = scene.num_variables();
    detail::require_samples(scene, nv * tau + 10, "timino");
    const Matrix x = center_columns(scene.values());

    auto out = detail::empty_outcome(scene);
    std::vector<Eigen::Index> work = detail::all_indices(nv);
    std::vector<Eigen::Index> hierarchy;  // sinks first
    std::vector<std::vector<Eigen::Index>> parents(static_cast<std::size_t>(nv));

    while (!work.empty()) {
        Eigen::Index best = -1;
        Screen best_s;
        for (auto y : work) {
            std::vector<Eigen::Index> others;
            for (auto z : work) {
                if (z != y) others.push_back(z);
            }
            const auto s = screen(x, y, work, others, tau, config.alpha);
            const bool better = best < 0 || s.min_p > best_s.min_p ||
                                (s.min_p == best_s.min_p && s.min_product > best_s.min_product);
            if (better) {
                best = y;
                best_s = s;
            }
        }
        if (!(best_s.min_p > config.alpha)) {
            out.abstained = true;
            out.notes.push_back("no candidate sink yields residuals independent of its inputs");
            return out;
        }
        hierarchy.push_back(best);
        for (auto z : work) {
            if (z != best) parents[best].push_back(z);
        }
        std::erase(work, best);
    }

    // Drop parents that are not needed for independent residuals.
    for (auto y : hierarchy) {
        std::vector<Eigen::Index> tested = parents[y];
        auto& pa = parents[y];
        for (auto c : std::vector<Eigen::Index>(pa)) {
            std::vector<Eigen::Index> trial;
            for (auto z : pa) {
                if (z != c) trial.push_back(z);
            }
            std::vector<Eigen::Index> inputs = trial;
            inputs.push_back(y);
            std::sort(inputs.begin(), inputs.end());
            if (screen(x, y, inputs, tested, tau, config.alpha).all_independent) pa = std::move(trial);
        }
        for (auto c : pa) detail::add_edge(out, scene, c, y);
    }

    std::string text;
    for (auto it = hierarchy.rbegin(); it != hierarchy.rend(); ++it) {
        text += (text.empty() ? "" : " < ") + scene.variable_names()[*it];
    }
    out.notes.push_back("hierarchy (top to bottom): " + text);
    return out;
}

}  // namespace tcd::discovery
