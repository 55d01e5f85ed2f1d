#include "tcd/stats/hypothesis.hpp"

#include "tcd/core/error.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tcd::stats {

double f_upper_tail(double f, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) throw InvalidArgument("F distribution needs positive degrees of freedom");
    if (!(f > 0.0)) return 1.0;
    if (std::isinf(f)) return 0.0;
    // P(F > f) = I_{d2 / (d2 + d1 f)}(d2 / 2, d1 / 2)
    const double x = d2 / (d2 + d1 * f);
    return std::clamp(boost::math::ibeta(d2 / 2.0, d1 / 2.0, x), 0.0, 1.0);
}

double chi2_upper_tail(double x, double dof) {
    if (!(dof > 0.0)) throw InvalidArgument("chi-squared distribution needs positive degrees of freedom");
    if (!(x > 0.0)) return 1.0;
    if (std::isinf(x)) return 0.0;
    return std::clamp(boost::math::gamma_q(dof / 2.0, x / 2.0), 0.0, 1.0);
}

double normal_two_sided(double z) {
    return std::clamp(std::erfc(std::abs(z) / std::sqrt(2.0)), 0.0, 1.0);
}

TestResult f_test_nested(double rss_restricted, double rss_full, int extra_params, int full_model_df,
                         int n_obs) {
    if (extra_params < 1) throw InvalidArgument("f_test_nested: extra_params must be >= 1");
    if (full_model_df < 0 || n_obs <= full_model_df) {
        throw InvalidArgument("f_test_nested: need n_obs > full_model_df (got " + std::to_string(n_obs) + " <= " +
                              std::to_string(full_model_df) + ")");
    }
    if (!(rss_restricted >= 0.0) || !(rss_full >= 0.0)) throw InvalidArgument("f_test_nested: negative RSS");

    const double d1 = extra_params;
    const double d2 = n_obs - full_model_df;
    TestResult r{0.0, 1.0, d1, d2};
    if (rss_restricted <= rss_full) return r;
    if (rss_full == 0.0) {
        r.statistic = std::numeric_limits<double>::max();
        r.p_value = 0.0;
        return r;
    }
    r.statistic = ((rss_restricted - rss_full) / d1) / (rss_full / d2);
    r.p_value = f_upper_tail(r.statistic, d1, d2);
    return r;
}

TestResult wald_chi2_block(const Vector& coefficients, const Matrix& covariance,
                           std::span<const Eigen::Index> block) {
    const auto k = static_cast<Eigen::Index>(block.size());
    if (k == 0) throw InvalidArgument("wald_chi2_block: empty block");
    Vector c(k);
    Matrix sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        c(i) = coefficients(block[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < k; ++j) {
            sub(i, j) = covariance(block[static_cast<std::size_t>(i)], block[static_cast<std::size_t>(j)]);
        }
    }
    TestResult r{0.0, 1.0, static_cast<double>(k), 0.0};

    Eigen::LDLT<Matrix> ldlt(sub);
    const Vector d = ldlt.vectorD();
    const double scale = std::max(d.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    if (ldlt.info() != Eigen::Success || d.minCoeff() <= 1e-12 * scale) {
        throw DegenerateData("wald_chi2_block: singular coefficient covariance block");
    }
    if (c.isZero(0.0)) return r;
    r.statistic = std::max(0.0, c.dot(ldlt.solve(c)));
    r.p_value = chi2_upper_tail(r.statistic, static_cast<double>(k));
    return r;
}

TestResult fisher_z_test(double rho, int n_obs, int n_conditioned) {
    const int dof = n_obs - n_conditioned - 3;
    if (dof <= 0) {
        throw InvalidArgument("fisher_z_test: n - |Z| - 3 must be positive (got " + std::to_string(dof) + ")");
    }
    if (!std::isfinite(rho) || std::abs(rho) > 1.0 + 1e-12) throw InvalidArgument("fisher_z_test: |rho| > 1");
    TestResult r{0.0, 1.0, static_cast<double>(dof), 0.0};
    if (std::abs(rho) >= 1.0) {
        r.statistic = std::copysign(std::numeric_limits<double>::max(), rho);
        r.p_value = 0.0;
        return r;
    }
    r.statistic = std::sqrt(static_cast<double>(dof)) * std::atanh(rho);
    r.p_value = normal_two_sided(r.statistic);
    return r;
}

std::vector<std::size_t> bh_fdr(std::span<const double> p_values, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) throw InvalidArgument("bh_fdr: alpha must lie in (0, 1]");
    const std::size_t m = p_values.size();
    for (double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("bh_fdr: p-values must lie in [0, 1]");
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

    double cutoff = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double p = p_values[order[i]];
        if (p <= static_cast<double>(i + 1) / static_cast<double>(m) * alpha) cutoff = p;
    }
    std::vector<std::size_t> rejected;
    if (cutoff < 0.0) return rejected;
    for (std::size_t i = 0; i < m; ++i) {
        if (p_values[i] <= cutoff) rejected.push_back(i);
    }
    return rejected;
}

}  // namespace tcd::stats
