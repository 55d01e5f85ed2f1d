#pragma once

#include "tcd/core/error.hpp"
#include "tcd/core/scene.hpp"

#include <vector>

namespace tcd::stats {

struct LassoOptions {
    int max_sweeps = 10000;
    /// Stop once a sweep lowers the objective by at most this fraction of max(1, |objective|)...
    double objective_tolerance = 1e-13;
    /// ...and no coefficient moved by more than this (scaled by its column RMS).
    double coefficient_tolerance = 1e-11;
};

struct LassoResult {
    Vector coefficients;
    /// Objective after each completed sweep; entry 0 is the starting point.
    std::vector<double> objective_history;
    int sweeps = 0;
    bool converged = false;
};

/// Cyclic coordinate descent with soft-thresholding for
///   (1 / 2n) ||y - X b||^2 + sum_j penalties[j] * |b_j|.
LassoResult lasso_coordinate_descent(const Matrix& design, const Vector& response, const Vector& penalties,
                                     const LassoOptions& options = {}, const Vector* warm_start = nullptr);

double lasso_objective(const Matrix& design, const Vector& response, const Vector& penalties,
                       const Vector& coefficients);

struct SparseFit {
    Vector coefficients;
    std::vector<Eigen::Index> active_set;
    double penalty = 0.0;
    double bic = 0.0;
};

/// Raised when coordinate descent hits its sweep cap; carries the best iterate.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, SparseFit best) : Error(what), best_(std::move(best)) {}
    const SparseFit& best_iterate() const noexcept { return best_; }

private:
    SparseFit best_;
};

/// Adaptive-lasso weights 1 / max(|pilot|, floor).
Vector adaptive_weights(const Vector& pilot, double floor = 1e-8);

/// Geometric grid from the smallest penalty that zeroes every coefficient
/// down to `ratio` times that value.
Vector lambda_grid(const Matrix& design, const Vector& response, const Vector& weights, int count = 50,
                   double ratio = 1e-4);

/// Weighted-l1 fits along `lambdas` (warm-started in the given order); the fit
/// with the lowest BIC = n log(rss / n) + log(n) |active| is returned.
SparseFit adaptive_lasso(const Matrix& design, const Vector& response, const Vector& initial_weights,
                         const Vector& lambdas, const LassoOptions& options = {});

}  // namespace tcd::stats
