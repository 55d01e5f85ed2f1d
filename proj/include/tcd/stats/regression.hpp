#pragma once

#include "tcd/core/scene.hpp"

namespace tcd::stats {

struct OlsFit {
    Vector coefficients;
    Vector residuals;
    double rss = 0.0;
    Eigen::Index rank = 0;
};

/// Least squares via a rank-revealing complete orthogonal decomposition.
/// Rank-deficient designs get the minimum-norm solution.
OlsFit ols_fit(const Matrix& design, const Vector& response);

/// Multi-response variant sharing one decomposition; column k of the result
/// matrices belongs to response column k.
struct OlsMultiFit {
    Matrix coefficients;
    Matrix residuals;
    Vector rss;
    Eigen::Index rank = 0;
};
OlsMultiFit ols_fit(const Matrix& design, const Matrix& responses);

}  // namespace tcd::stats
