#pragma once

#include "tcd/core/scene.hpp"
#include "tcd/stats/hypothesis.hpp"

namespace tcd::stats {

/// Pearson correlation. Throws DegenerateData if either input is constant.
double pearson(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y);

/// Correlation of the residuals of x and y after regressing both on Z plus an
/// intercept. An empty Z gives the plain Pearson correlation.
double partial_correlation(const Vector& x, const Vector& y, const Matrix& conditioning);

struct CrossCovarianceResult {
    /// statistic: largest |z| over lags; p_value: Bonferroni-adjusted, clamped to 1.
    TestResult test;
    /// Lag k pairs a[t] with b[t + k]; positive k means b follows a.
    int dominant_lag = 0;
    double min_lag_p = 1.0;
    /// min_lag_p * (2 * max_lag + 1) before clamping; orders tests that all clamp to 1.
    double bonferroni_product = 1.0;
    bool independent = true;
};

/// Normalized cross-covariance at lags -max_lag..max_lag, each lag tested with
/// Fisher z on its overlap, combined by Bonferroni over the 2 * max_lag + 1 lags.
CrossCovarianceResult cross_covariance_independence(const Vector& a, const Vector& b, int max_lag,
                                                    double alpha);

}  // namespace tcd::stats
