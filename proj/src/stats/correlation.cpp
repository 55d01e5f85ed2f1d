#include "tcd/stats/correlation.hpp"

#include "tcd/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace tcd::stats {
namespace {

// Correlation of two already-centred vectors, or nullopt if either is flat.
std::optional<double> centred_correlation(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
    const double saa = a.squaredNorm();
    const double sbb = b.squaredNorm();
    if (!(saa > 0.0) || !(sbb > 0.0)) return std::nullopt;
    const double r = a.dot(b) / std::sqrt(saa * sbb);
    return std::clamp(r, -1.0, 1.0);
}

bool is_flat(const Eigen::Ref<const Vector>& v) {
    if (v.size() == 0) return true;
    const double scale = std::max(v.cwiseAbs().maxCoeff(), 1e-300);
    return (v.array() - v.mean()).abs().maxCoeff() <= 1e-13 * scale;
}

}  // namespace

double pearson(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) {
    if (x.size() != y.size()) throw InvalidArgument("pearson: length mismatch");
    if (x.size() < 2) throw InvalidArgument("pearson: need at least two observations");
    const Vector xc = x.array() - x.mean();
    const Vector yc = y.array() - y.mean();
    auto r = centred_correlation(xc, yc);
    if (!r) throw DegenerateData("pearson: zero-variance input");
    return *r;
}

double partial_correlation(const Vector& x, const Vector& y, const Matrix& conditioning) {
    const Eigen::Index n = x.size();
    if (y.size() != n || (conditioning.cols() > 0 && conditioning.rows() != n)) {
        throw InvalidArgument("partial_correlation: length mismatch");
    }
    if (n <= conditioning.cols() + 2) {
        throw InvalidArgument("partial_correlation: need n > |Z| + 2");
    }
    if (conditioning.cols() == 0) return pearson(x, y);

    Matrix z(n, conditioning.cols() + 1);
    z.col(0).setOnes();
    z.rightCols(conditioning.cols()) = conditioning;
    Matrix xy(n, 2);
    xy.col(0) = x;
    xy.col(1) = y;
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(z);
    const Matrix res = xy - z * cod.solve(xy);

    // Residuals that are numerically zero relative to the input mean Z explains everything.
    const double tol = 1e-10;
    const double xs = std::max((x.array() - x.mean()).matrix().norm(), 1e-300);
    const double ys = std::max((y.array() - y.mean()).matrix().norm(), 1e-300);
    if (res.col(0).norm() <= tol * xs || res.col(1).norm() <= tol * ys) {
        throw DegenerateData("partial_correlation: zero-variance residuals after conditioning");
    }
    auto r = centred_correlation(res.col(0), res.col(1));
    if (!r) throw DegenerateData("partial_correlation: zero-variance residuals after conditioning");
    return *r;
}

CrossCovarianceResult cross_covariance_independence(const Vector& a, const Vector& b, int max_lag,
                                                    double alpha) {
    const Eigen::Index n = a.size();
    if (b.size() != n) throw InvalidArgument("cross_covariance_independence: length mismatch");
    if (max_lag < 0) throw InvalidArgument("cross_covariance_independence: negative max_lag");
    if (n - max_lag <= 3) throw InvalidArgument("cross_covariance_independence: series too short for max_lag");
    if (is_flat(a) || is_flat(b)) throw DegenerateData("cross_covariance_independence: constant input");

    CrossCovarianceResult out;
    double best_abs_z = -1.0;
    for (int k = -max_lag; k <= max_lag; ++k) {
        const Eigen::Index m = n - std::abs(k);
        const Eigen::Index a0 = k >= 0 ? 0 : -k;
        const Eigen::Index b0 = k >= 0 ? k : 0;
        const Vector sa = a.segment(a0, m).array() - a.segment(a0, m).mean();
        const Vector sb = b.segment(b0, m).array() - b.segment(b0, m).mean();
        const double r = centred_correlation(sa, sb).value_or(0.0);
        const auto t = fisher_z_test(r, static_cast<int>(m), 0);
        if (std::abs(t.statistic) > best_abs_z) {
            best_abs_z = std::abs(t.statistic);
            out.dominant_lag = k;
            out.min_lag_p = t.p_value;
        }
    }
    out.bonferroni_product = out.min_lag_p * static_cast<double>(2 * max_lag + 1);
    out.test = TestResult{best_abs_z, std::min(1.0, out.bonferroni_product), static_cast<double>(2 * max_lag + 1),
                          0.0};
    out.independent = out.test.p_value > alpha;
    return out;
}

}  // namespace tcd::stats
