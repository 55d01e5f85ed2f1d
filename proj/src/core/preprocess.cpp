#include "tcd/core/preprocess.hpp"

#include "tcd/core/error.hpp"

#include <cmath>

namespace tcd {

TimeSeriesScene moving_average(const TimeSeriesScene& scene, int window) {
    if (window < 1) throw InvalidArgument("moving average window must be >= 1");
    const Matrix& x = scene.values();
    Matrix out(x.rows(), x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        for (Eigen::Index t = 0; t < x.rows(); ++t) {
            const Eigen::Index start = std::max<Eigen::Index>(0, t - window + 1);
            out(t, c) = x.col(c).segment(start, t - start + 1).mean();
        }
    }
    return scene.with_values(std::move(out), scene.sample_rate_hz());
}

TimeSeriesScene resample_linear(const TimeSeriesScene& scene, double target_rate_hz) {
    if (!(target_rate_hz > 0.0)) throw InvalidArgument("target rate must be positive");
    const Matrix& x = scene.values();
    const double rate = scene.sample_rate_hz();
    const double last_t = static_cast<double>(x.rows() - 1) / rate;
    const auto count = static_cast<Eigen::Index>(std::floor(last_t * target_rate_hz + 1e-9)) + 1;
    if (count < 2) {
        throw InvalidArgument("resampling " + scene.scene_id() + " to " + std::to_string(target_rate_hz) +
                              " Hz leaves fewer than 2 samples");
    }
    Matrix out(count, x.cols());
    for (Eigen::Index k = 0; k < count; ++k) {
        const double pos = static_cast<double>(k) * rate / target_rate_hz;
        auto i = static_cast<Eigen::Index>(std::floor(pos));
        if (i >= x.rows() - 1) {
            out.row(k) = x.row(x.rows() - 1);
            continue;
        }
        const double frac = pos - static_cast<double>(i);
        if (frac == 0.0) {
            out.row(k) = x.row(i);
        } else {
            out.row(k) = x.row(i) + frac * (x.row(i + 1) - x.row(i));
        }
    }
    return scene.with_values(std::move(out), target_rate_hz);
}

LaggedDesign lagged_design(const Matrix& values, std::span<const Eigen::Index> targets,
                           std::span<const Eigen::Index> predictors, int max_lag) {
    const Eigen::Index T = values.rows();
    if (max_lag < 1) throw InvalidArgument("max_lag must be >= 1");
    if (max_lag >= T) {
        throw InvalidArgument("max_lag " + std::to_string(max_lag) + " must be below the series length " +
                              std::to_string(T));
    }
    if (targets.empty() || predictors.empty()) throw InvalidArgument("lagged design needs targets and predictors");
    const Eigen::Index rows = T - max_lag;
    LaggedDesign out{Matrix(rows, static_cast<Eigen::Index>(predictors.size()) * max_lag),
                     Matrix(rows, static_cast<Eigen::Index>(targets.size()))};
    for (std::size_t p = 0; p < predictors.size(); ++p) {
        for (int lag = 1; lag <= max_lag; ++lag) {
            out.design.col(static_cast<Eigen::Index>(p) * max_lag + (lag - 1)) =
                values.col(predictors[p]).segment(max_lag - lag, rows);
        }
    }
    for (std::size_t k = 0; k < targets.size(); ++k) {
        out.response.col(static_cast<Eigen::Index>(k)) = values.col(targets[k]).segment(max_lag, rows);
    }
    return out;
}

LaggedDesign lagged_design(const TimeSeriesScene& scene, std::span<const Eigen::Index> targets,
                           std::span<const Eigen::Index> predictors, int max_lag) {
    return lagged_design(scene.values(), targets, predictors, max_lag);
}

Matrix center_columns(const Matrix& values) {
    return values.rowwise() - values.colwise().mean();
}

}  // namespace tcd
