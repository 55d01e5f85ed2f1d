#include "common.hpp"

#include "tcd/core/preprocess.hpp"
#include "tcd/discovery/components.hpp"
#include "tcd/stats/correlation.hpp"
#include "tcd/stats/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tcd::discovery {
namespace {

struct CiResult {
    double p_value = 1.0;
    double rho = 0.0;
};

// Test x(t - lag_x) _||_ y(t) | conditions on rows t in [first, T).
CiResult ci_test(const Matrix& data, Eigen::Index first, Eigen::Index y, LaggedParent x,
                 const std::vector<LaggedParent>& conds, std::vector<std::string>* log) {
    const Eigen::Index n = data.rows() - first;
    const Vector yv = data.col(y).segment(first, n);
    const Vector xv = data.col(x.variable).segment(first - x.lag, n);
    Matrix z(n, static_cast<Eigen::Index>(conds.size()));
    for (std::size_t k = 0; k < conds.size(); ++k) {
        z.col(static_cast<Eigen::Index>(k)) = data.col(conds[k].variable).segment(first - conds[k].lag, n);
    }
    const auto k = static_cast<int>(conds.size());
    if (n - k - 3 <= 0 || n <= k + 2) {
        if (log) log->push_back("too few samples for conditioning set; test treated as independent");
        return {};
    }
    try {
        const double rho = stats::partial_correlation(xv, yv, z);
        return {stats::fisher_z_test(rho, static_cast<int>(n), k).p_value, rho};
    } catch (const DegenerateData& e) {
        if (log) log->push_back(std::string("degenerate conditional test treated as independent: ") + e.what());
        return {};
    }
}

}  // namespace

std::vector<std::vector<LaggedParent>> pcmci_select_parents(const Matrix& data, int tau, double alpha,
                                                            std::vector<std::string>* log) {
    const Eigen::Index nv = data.cols();
    std::vector<std::vector<LaggedParent>> parents(static_cast<std::size_t>(nv));
    for (Eigen::Index y = 0; y < nv; ++y) {
        std::vector<LaggedParent> cands;
        for (Eigen::Index v = 0; v < nv; ++v) {
            for (int l = 1; l <= tau; ++l) cands.push_back({v, l});
        }
        // Strength: smallest |partial correlation| seen so far.
        std::vector<double> strength(cands.size(), std::numeric_limits<double>::infinity());
        std::vector<std::size_t> alive(cands.size());
        for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;

        for (std::size_t p = 0; p < alive.size(); ++p) {
            std::vector<std::size_t> ranked = alive;
            std::stable_sort(ranked.begin(), ranked.end(),
                             [&](std::size_t a, std::size_t b) { return strength[a] > strength[b]; });
            std::vector<std::size_t> removed;
            for (auto c : ranked) {
                std::vector<LaggedParent> conds;
                for (auto o : ranked) {
                    if (conds.size() == p) break;
                    if (o != c) conds.push_back(cands[o]);
                }
                const auto r = ci_test(data, tau, y, cands[c], conds, log);
                strength[c] = std::min(strength[c], std::abs(r.rho));
                if (r.p_value > alpha) removed.push_back(c);
            }
            if (removed.empty()) break;
            std::erase_if(alive, [&](std::size_t c) {
                return std::find(removed.begin(), removed.end(), c) != removed.end();
            });
        }
        std::stable_sort(alive.begin(), alive.end(),
                         [&](std::size_t a, std::size_t b) { return strength[a] > strength[b]; });
        for (auto c : alive) parents[y].push_back(cands[c]);
    }
    return parents;
}

std::vector<LinkPValue> pcmci_mci_pvalues(const Matrix& data, int tau,
                                          const std::vector<std::vector<LaggedParent>>& parents,
                                          std::vector<std::string>* log) {
    const Eigen::Index nv = data.cols();
    const Eigen::Index first = 2 * static_cast<Eigen::Index>(tau);
    if (data.rows() - first <= 3) throw InvalidArgument("pcmci: series too short for the MCI stage");
    std::vector<LinkPValue> out;
    for (Eigen::Index y = 0; y < nv; ++y) {
        for (Eigen::Index x = 0; x < nv; ++x) {
            for (int l = 1; l <= tau; ++l) {
                const LaggedParent link{x, l};
                std::vector<LaggedParent> conds;
                for (const auto& p : parents[y]) {
                    if (!(p == link)) conds.push_back(p);
                }
                for (const auto& p : parents[x]) {
                    const LaggedParent shifted{p.variable, p.lag + l};
                    if (!(shifted == link) && std::find(conds.begin(), conds.end(), shifted) == conds.end()) {
                        conds.push_back(shifted);
                    }
                }
                const auto r = ci_test(data, first, y, link, conds, log);
                out.push_back({x, y, l, r.p_value, r.rho});
            }
        }
    }
    return out;
}

DiscoveryOutcome pcmci_discover(const TimeSeriesScene& scene, const MethodConfig& config) {
    config.validate();
    const int tau = config.max_lag;
    const Eigen::Index nv = scene.num_variables();
    detail::require_samples(scene, nv * tau + 10, "pcmci");
    const Matrix x = center_columns(scene.values());

    auto out = detail::empty_outcome(scene);
    std::vector<std::string> log;
    const auto parents = pcmci_select_parents(x, tau, config.alpha, &log);
    const auto links = pcmci_mci_pvalues(x, tau, parents, &log);

    std::vector<double> pvals;
    pvals.reserve(links.size());
    for (const auto& l : links) pvals.push_back(l.p_value);
    for (auto k : stats::bh_fdr(pvals, config.alpha)) {
        const auto& l = links[k];
        if (l.source != l.target) detail::add_edge(out, scene, l.source, l.target);
    }
    for (const auto& l : links) out.diagnostics.push_back(detail::diag(scene, l.source, l.target, l.lag, l.p_value, "p_value"));
    if (!log.empty()) {
        out.notes.push_back(std::to_string(log.size()) + " conditional test(s) treated as independent; first: " +
                            log.front());
    }
    return out;
}

}  // namespace tcd::discovery
