#include "tcd/stats/regression.hpp"

#include "tcd/core/error.hpp"

namespace tcd::stats {

OlsMultiFit ols_fit(const Matrix& design, const Matrix& responses) {
    if (design.rows() == 0 || design.cols() == 0) throw InvalidArgument("ols_fit: empty design");
    if (responses.rows() != design.rows()) throw InvalidArgument("ols_fit: design/response row mismatch");
    if (!design.allFinite() || !responses.allFinite()) throw InvalidArgument("ols_fit: non-finite input");

    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(design);
    OlsMultiFit fit;
    fit.coefficients = cod.solve(responses);
    fit.residuals = responses - design * fit.coefficients;
    fit.rss = fit.residuals.colwise().squaredNorm().transpose();
    fit.rank = cod.rank();
    return fit;
}

OlsFit ols_fit(const Matrix& design, const Vector& response) {
    auto multi = ols_fit(design, Matrix(response));
    return OlsFit{multi.coefficients.col(0), multi.residuals.col(0), multi.rss(0), multi.rank};
}

}  // namespace tcd::stats
