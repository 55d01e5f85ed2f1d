#pragma once

// Building blocks of the discovery methods, exposed for testing and reuse.

#include "tcd/core/scene.hpp"

#include <vector>

namespace tcd::discovery {

/// DirectLiNGAM causal order of the columns of `data` (rows are samples).
/// Throws DegenerateData if a column or an intermediate residual is constant.
std::vector<Eigen::Index> direct_lingam_order(const Matrix& data);

/// Maximum-entropy approximation of the differential entropy of a
/// standardized sample (log-cosh and Gaussian-derivative contrasts).
double approx_entropy(const Vector& standardized);

struct LaggedParent {
    Eigen::Index variable = 0;
    int lag = 1;
    friend bool operator==(const LaggedParent&, const LaggedParent&) = default;
};

/// PC1 condition selection: parents[y] in decreasing strength order.
/// `centered` is the mean-centred data matrix.
std::vector<std::vector<LaggedParent>> pcmci_select_parents(const Matrix& centered, int max_lag, double alpha,
                                                            std::vector<std::string>* log = nullptr);

struct LinkPValue {
    Eigen::Index source = 0;
    Eigen::Index target = 0;
    int lag = 1;
    double p_value = 1.0;
    double partial_correlation = 0.0;
};

/// MCI p-values for every (source, lag, target) link, self-links included,
/// ordered by target, then source, then lag.
std::vector<LinkPValue> pcmci_mci_pvalues(const Matrix& centered, int max_lag,
                                          const std::vector<std::vector<LaggedParent>>& parents,
                                          std::vector<std::string>* log = nullptr);

struct DynotearsFit {
    LaggedCoefficients coefficients;
    /// One objective trace per target variable; entry 0 is the zero start.
    std::vector<std::vector<double>> objective_history;
    bool converged = true;
};

/// Per-target l1-penalized least squares on the lagged design of `centered`:
///   (1 / 2n) ||y - X a||^2 + lambda ||a||_1
/// by coordinate descent, at most `max_sweeps` sweeps.
DynotearsFit dynotears_fit(const Matrix& centered, int max_lag, double lambda, int max_sweeps);

}  // namespace tcd::discovery
