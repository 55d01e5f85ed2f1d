#pragma once

#include "tcd/core/scene.hpp"

#include <span>
#include <vector>

namespace tcd::stats {

/// Outcome of a significance test. `dof1`/`dof2` carry the test's degrees of
/// freedom (F: numerator/denominator, chi-squared: dof1 only, Fisher z: the
/// effective sample size n - |Z| - 3 in dof1).
struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    double dof1 = 0.0;
    double dof2 = 0.0;
};

/// Upper tail of the F(d1, d2) distribution.
double f_upper_tail(double f, double d1, double d2);

/// Upper tail of the chi-squared distribution with `dof` degrees of freedom.
double chi2_upper_tail(double x, double dof);

/// Two-sided standard-normal tail, P(|Z| >= |z|).
double normal_two_sided(double z);

/// Nested-model F test:
/// F = ((rss_r - rss_f) / q) / (rss_f / (n - k_full)).
TestResult f_test_nested(double rss_restricted, double rss_full, int extra_params, int full_model_df,
                         int n_obs);

/// Wald test that the coefficients indexed by `block` are jointly zero, using
/// the block of `covariance`. Throws DegenerateData for a singular block.
TestResult wald_chi2_block(const Vector& coefficients, const Matrix& covariance,
                           std::span<const Eigen::Index> block);

/// z = sqrt(n - k - 3) * atanh(rho), two-sided normal p-value.
TestResult fisher_z_test(double rho, int n_obs, int n_conditioned);

/// Benjamini-Hochberg step-up procedure. Returns the rejected indices in
/// ascending index order.
std::vector<std::size_t> bh_fdr(std::span<const double> p_values, double alpha);

}  // namespace tcd::stats
