#pragma once

#include "tcd/core/scene.hpp"

#include <span>

namespace tcd {

/// Trailing moving average: sample t becomes the mean of samples
/// max(0, t - window + 1) .. t. Length is preserved.
TimeSeriesScene moving_average(const TimeSeriesScene& scene, int window);

/// Linear-interpolation resampling onto a grid starting at t = 0 with spacing
/// 1 / target_rate_hz. Stops at the last original sample; never extrapolates.
TimeSeriesScene resample_linear(const TimeSeriesScene& scene, double target_rate_hz);

/// Design/response pair for a lagged regression.
struct LaggedDesign {
    Matrix design;    ///< (T - max_lag) x (|predictors| * max_lag)
    Matrix response;  ///< (T - max_lag) x |targets|
};

/// Row r holds the predictors at times (max_lag + r - 1) ... (r) and the
/// targets at time max_lag + r. Columns are predictor-major then lag-ascending:
/// column p * max_lag + (lag - 1) is predictor p at that lag.
LaggedDesign lagged_design(const Matrix& values, std::span<const Eigen::Index> targets,
                           std::span<const Eigen::Index> predictors, int max_lag);

LaggedDesign lagged_design(const TimeSeriesScene& scene, std::span<const Eigen::Index> targets,
                           std::span<const Eigen::Index> predictors, int max_lag);

/// Column-wise mean removal.
Matrix center_columns(const Matrix& values);

}  // namespace tcd
