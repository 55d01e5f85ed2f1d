#include "tcd/stats/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tcd::stats {
namespace {

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

double rss_of(const Matrix& x, const Vector& y, const Vector& b) { return (y - x * b).squaredNorm(); }

std::vector<Eigen::Index> support(const Vector& b) {
    std::vector<Eigen::Index> s;
    for (Eigen::Index j = 0; j < b.size(); ++j) {
        if (b(j) != 0.0) s.push_back(j);
    }
    return s;
}

}  // namespace

double lasso_objective(const Matrix& design, const Vector& response, const Vector& penalties,
                       const Vector& coefficients) {
    const auto n = static_cast<double>(design.rows());
    return 0.5 * rss_of(design, response, coefficients) / n + penalties.dot(coefficients.cwiseAbs());
}

LassoResult lasso_coordinate_descent(const Matrix& design, const Vector& response, const Vector& penalties,
                                     const LassoOptions& options, const Vector* warm_start) {
    const Eigen::Index n = design.rows();
    const Eigen::Index p = design.cols();
    if (n == 0 || p == 0) throw InvalidArgument("lasso: empty design");
    if (response.size() != n || penalties.size() != p) throw InvalidArgument("lasso: dimension mismatch");
    if ((penalties.array() < 0.0).any()) throw InvalidArgument("lasso: negative penalty");

    const double inv_n = 1.0 / static_cast<double>(n);
    // Covariance updates: gram = X'X / n, grad = X'r / n with r the current residual.
    const Matrix gram = (design.transpose() * design) * inv_n;
    const Vector xty = design.transpose() * response * inv_n;
    const double yty = response.squaredNorm() * inv_n;

    LassoResult out;
    out.coefficients = warm_start ? *warm_start : Vector::Zero(p);
    if (out.coefficients.size() != p) throw InvalidArgument("lasso: warm start has wrong size");
    Vector grad = xty - gram * out.coefficients;

    auto objective = [&] {
        // 0.5 * r'r / n == 0.5 * (y'y/n - b'(X'y/n) - b'grad)
        const double loss = 0.5 * (yty - out.coefficients.dot(xty) - out.coefficients.dot(grad));
        return std::max(loss, 0.0) + penalties.dot(out.coefficients.cwiseAbs());
    };

    double f = objective();
    out.objective_history.push_back(f);
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
        double max_move = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            const double gjj = gram(j, j);
            const double old = out.coefficients(j);
            double next = 0.0;
            if (gjj > 0.0) next = soft_threshold(grad(j) + gjj * old, penalties(j)) / gjj;
            const double delta = next - old;
            if (delta != 0.0) {
                out.coefficients(j) = next;
                grad.noalias() -= gram.col(j) * delta;
                max_move = std::max(max_move, std::abs(delta) * std::sqrt(gjj));
            }
        }
        const double f_next = objective();
        out.objective_history.push_back(f_next);
        out.sweeps = sweep + 1;
        const bool small_drop = (f - f_next) <= options.objective_tolerance * std::max(1.0, std::abs(f));
        f = f_next;
        if (small_drop && max_move <= options.coefficient_tolerance) {
            out.converged = true;
            break;
        }
    }
    return out;
}

Vector adaptive_weights(const Vector& pilot, double floor) {
    return pilot.cwiseAbs().cwiseMax(floor).cwiseInverse();
}

Vector lambda_grid(const Matrix& design, const Vector& response, const Vector& weights, int count, double ratio) {
    if (count < 1) throw InvalidArgument("lambda_grid: count must be >= 1");
    const Vector corr = (design.transpose() * response).cwiseAbs() / static_cast<double>(design.rows());
    const double lmax = corr.cwiseQuotient(weights).maxCoeff();
    Vector grid(count);
    if (count == 1 || !(lmax > 0.0)) {
        grid.setConstant(lmax);
        return grid;
    }
    for (int i = 0; i < count; ++i) {
        grid(i) = lmax * std::pow(ratio, static_cast<double>(i) / (count - 1));
    }
    return grid;
}

SparseFit adaptive_lasso(const Matrix& design, const Vector& response, const Vector& initial_weights,
                         const Vector& lambdas, const LassoOptions& options) {
    if (lambdas.size() == 0) throw InvalidArgument("adaptive_lasso: empty lambda grid");
    if (initial_weights.size() != design.cols()) throw InvalidArgument("adaptive_lasso: weight size mismatch");
    if (!(initial_weights.array() > 0.0).all()) throw InvalidArgument("adaptive_lasso: weights must be positive");

    const auto n = static_cast<double>(design.rows());
    SparseFit best;
    best.bic = std::numeric_limits<double>::infinity();
    bool all_converged = true;
    Vector warm = Vector::Zero(design.cols());
    for (Eigen::Index k = 0; k < lambdas.size(); ++k) {
        const double lambda = lambdas(k);
        if (!(lambda >= 0.0)) throw InvalidArgument("adaptive_lasso: negative lambda");
        auto fit = lasso_coordinate_descent(design, response, initial_weights * lambda, options, &warm);
        warm = fit.coefficients;
        all_converged = all_converged && fit.converged;

        const double rss = std::max(rss_of(design, response, fit.coefficients), 1e-300);
        auto active = support(fit.coefficients);
        const double bic = n * std::log(rss / n) + std::log(n) * static_cast<double>(active.size());
        if (bic < best.bic) {
            best = SparseFit{fit.coefficients, std::move(active), lambda, bic};
        }
    }
    if (!all_converged) {
        throw ConvergenceError("adaptive_lasso: coordinate descent hit the sweep cap", best);
    }
    return best;
}

}  // namespace tcd::stats
