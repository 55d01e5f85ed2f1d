#include "common.hpp"

#include "tcd/core/preprocess.hpp"
#include "tcd/discovery/components.hpp"
#include "tcd/stats/lasso.hpp"

#include <limits>

namespace tcd::discovery {

DynotearsFit dynotears_fit(const Matrix& centered, int tau, double lambda, int max_sweeps) {
    const Eigen::Index nv = centered.cols();
    const auto idx = detail::all_indices(nv);
    const auto d = lagged_design(centered, idx, idx, tau);
    stats::LassoOptions opt;
    opt.max_sweeps = max_sweeps;
    opt.objective_tolerance = 1e-10;
    opt.coefficient_tolerance = std::numeric_limits<double>::infinity();  // objective change only

    DynotearsFit out{LaggedCoefficients(tau, nv), {}, true};
    const Vector pen = Vector::Constant(d.design.cols(), lambda);
    for (Eigen::Index y = 0; y < nv; ++y) {
        auto r = stats::lasso_coordinate_descent(d.design, Vector(d.response.col(y)), pen, opt);
        for (Eigen::Index c = 0; c < nv; ++c) {
            for (int l = 1; l <= tau; ++l) out.coefficients.at(l)(y, c) = r.coefficients(c * tau + l - 1);
        }
        out.objective_history.push_back(std::move(r.objective_history));
        out.converged = out.converged && r.converged;
    }
    return out;
}

DiscoveryOutcome dynotears_discover(const TimeSeriesScene& scene, const MethodConfig& config) {
    config.validate();
    const int tau = config.max_lag;
    detail::require_samples(scene, static_cast<Eigen::Index>(tau) + 10, "dynotears");
    const double lambda = config.param("lambda_a", 0.05);
    const double threshold = config.param("threshold_a", 0.01);
    const int sweeps = static_cast<int>(config.param("max_iterations", 100));
    if (lambda < 0.0 || threshold < 0.0 || sweeps < 1) throw InvalidArgument("dynotears: invalid parameters");

    auto fit = dynotears_fit(center_columns(scene.values()), tau, lambda, sweeps);
    auto out = detail::empty_outcome(scene);
    if (!fit.converged) out.notes.push_back("coordinate descent hit the iteration cap; returning the last iterate");
    const Eigen::Index nv = scene.num_variables();
    for (Eigen::Index y = 0; y < nv; ++y) {
        for (Eigen::Index c = 0; c < nv; ++c) {
            const double m = fit.coefficients.max_abs(y, c);
            out.diagnostics.push_back(detail::diag(scene, c, y, 0, m, "max_abs_coefficient"));
            if (c != y && m > threshold) detail::add_edge(out, scene, c, y);
        }
    }
    out.lagged = std::move(fit.coefficients);
    return out;
}

}  // namespace tcd::discovery
