#include "common.hpp"

#include "tcd/core/error.hpp"
#include "tcd/core/preprocess.hpp"
#include "tcd/stats/hypothesis.hpp"
#include "tcd/stats/regression.hpp"

#include <array>

namespace tcd::discovery {

DiscoveryOutcome pwgc_discover(const TimeSeriesScene& scene, const MethodConfig& config) {
    config.validate();
    const int tau = config.max_lag;
    detail::require_samples(scene, 2 * static_cast<Eigen::Index>(tau) + 10, "pwgc");
    const Matrix x = center_columns(scene.values());
    const Eigen::Index nv = scene.num_variables();

    auto out = detail::empty_outcome(scene);
    for (Eigen::Index y = 0; y < nv; ++y) {
        const std::array<Eigen::Index, 1> own{y};
        const auto restricted = lagged_design(x, own, own, tau);
        const Vector response = restricted.response.col(0);
        const double rss_r = stats::ols_fit(restricted.design, response).rss;
        const auto n = static_cast<int>(response.size());
        for (Eigen::Index c = 0; c < nv; ++c) {
            if (c == y) continue;
            const std::array<Eigen::Index, 2> both{y, c};
            const auto full = lagged_design(x, own, both, tau);
            const double rss_f = stats::ols_fit(full.design, response).rss;
            const auto t = stats::f_test_nested(rss_r, rss_f, tau, 2 * tau, n);
            out.diagnostics.push_back(detail::diag(scene, c, y, 0, t.p_value, "p_value"));
            if (t.p_value <= config.alpha) detail::add_edge(out, scene, c, y);
        }
    }
    return out;
}

namespace {

// Names of variables whose lag block is linearly dependent on the rest of the design.
std::string collinear_blocks(const Matrix& design, const TimeSeriesScene& scene, int tau) {
    const Eigen::Index nv = scene.num_variables();
    const auto full_rank = Eigen::CompleteOrthogonalDecomposition<Matrix>(design).rank();
    std::string names;
    for (Eigen::Index v = 0; v < nv; ++v) {
        Matrix rest(design.rows(), design.cols() - tau);
        Eigen::Index k = 0;
        for (Eigen::Index j = 0; j < design.cols(); ++j) {
            if (j / tau != v) rest.col(k++) = design.col(j);
        }
        const auto r = rest.cols() ? Eigen::CompleteOrthogonalDecomposition<Matrix>(rest).rank() : 0;
        if (full_rank - r < tau) {
            names += (names.empty() ? "" : ", ") + scene.variable_names()[static_cast<std::size_t>(v)];
        }
    }
    return names.empty() ? std::string("unknown") : names;
}

}  // namespace

DiscoveryOutcome mvgc_discover(const TimeSeriesScene& scene, const MethodConfig& config) {
    config.validate();
    const int tau = config.max_lag;
    const Eigen::Index nv = scene.num_variables();
    detail::require_samples(scene, nv * tau + 10, "mvgc");
    const Matrix x = center_columns(scene.values());
    const auto idx = detail::all_indices(nv);
    const auto d = lagged_design(x, idx, idx, tau);
    const Eigen::Index n = d.design.rows();
    const Eigen::Index p = d.design.cols();

    if (n <= p) throw InvalidArgument("mvgc: fewer lagged rows than VAR coefficients; lower max_lag");
    const auto fit = stats::ols_fit(d.design, d.response);
    if (fit.rank < p) {
        throw DegenerateData("mvgc: singular coefficient covariance; collinear lag block(s): " +
                             collinear_blocks(d.design, scene, tau));
    }
    const Matrix xtx_inv = (d.design.transpose() * d.design).ldlt().solve(Matrix::Identity(p, p));

    auto out = detail::empty_outcome(scene);
    LaggedCoefficients lagged(tau, nv);
    std::vector<double> pvals;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    std::vector<Eigen::Index> block(static_cast<std::size_t>(tau));
    for (Eigen::Index y = 0; y < nv; ++y) {
        const Vector coef = fit.coefficients.col(y);
        for (Eigen::Index c = 0; c < nv; ++c) {
            for (int l = 1; l <= tau; ++l) lagged.at(l)(y, c) = coef(c * tau + l - 1);
        }
        const double sigma2 = fit.rss(y) / static_cast<double>(n - p);
        const Matrix cov = sigma2 * xtx_inv;
        for (Eigen::Index c = 0; c < nv; ++c) {
            if (c == y) continue;
            for (int l = 0; l < tau; ++l) block[static_cast<std::size_t>(l)] = c * tau + l;
            stats::TestResult t;
            try {
                t = stats::wald_chi2_block(coef, cov, block);
            } catch (const DegenerateData&) {
                throw DegenerateData("mvgc: singular coefficient covariance for block " +
                                     scene.variable_names()[static_cast<std::size_t>(c)] + " -> " +
                                     scene.variable_names()[static_cast<std::size_t>(y)]);
            }
            pvals.push_back(t.p_value);
            pairs.emplace_back(c, y);
            out.diagnostics.push_back(detail::diag(scene, c, y, 0, t.p_value, "p_value"));
        }
    }
    for (auto k : stats::bh_fdr(pvals, config.alpha)) detail::add_edge(out, scene, pairs[k].first, pairs[k].second);
    out.lagged = std::move(lagged);
    return out;
}

}  // namespace tcd::discovery
