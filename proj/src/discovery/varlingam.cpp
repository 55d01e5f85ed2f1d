#include "common.hpp"

#include "tcd/core/error.hpp"
#include "tcd/core/preprocess.hpp"
#include "tcd/discovery/components.hpp"
#include "tcd/stats/hypothesis.hpp"
#include "tcd/stats/lasso.hpp"
#include "tcd/stats/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tcd::discovery {
namespace {

Vector standardize(const Vector& v, const char* what) {
    const Vector c = v.array() - v.mean();
    const double sd = std::sqrt(c.squaredNorm() / static_cast<double>(c.size()));
    if (!(sd > 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff()))) {
        throw DegenerateData(std::string("varlingam: zero-variance ") + what);
    }
    return c / sd;
}

// xi with its least-squares projection on xj removed.
Vector residual(const Vector& xi, const Vector& xj) {
    const Vector ci = xi.array() - xi.mean();
    const Vector cj = xj.array() - xj.mean();
    const double var = cj.squaredNorm();
    if (!(var > 0.0)) return ci;
    return ci - (ci.dot(cj) / var) * cj;
}

double jarque_bera_p(const Vector& v) {
    const auto n = static_cast<double>(v.size());
    const Vector c = v.array() - v.mean();
    const double m2 = c.squaredNorm() / n;
    if (!(m2 > 0.0)) return 1.0;
    const double skew = c.array().cube().sum() / n / std::pow(m2, 1.5);
    const double kurt = c.array().square().square().sum() / n / (m2 * m2);
    const double jb = n / 6.0 * (skew * skew + 0.25 * (kurt - 3.0) * (kurt - 3.0));
    return stats::chi2_upper_tail(jb, 2.0);
}

}  // namespace

double approx_entropy(const Vector& u) {
    constexpr double k1 = 79.047;
    constexpr double k2 = 7.4129;
    constexpr double gamma = 0.37457;
    const double logcosh = u.array().cosh().log().mean();
    const double gauss = (u.array() * (-0.5 * u.array().square()).exp()).mean();
    return (1.0 + std::log(2.0 * std::numbers::pi)) / 2.0 - k1 * std::pow(logcosh - gamma, 2) -
           k2 * std::pow(gauss, 2);
}

std::vector<Eigen::Index> direct_lingam_order(const Matrix& data) {
    Matrix x = data;
    std::vector<Eigen::Index> remaining = detail::all_indices(x.cols());
    std::vector<Eigen::Index> order;
    while (!remaining.empty()) {
        Eigen::Index root = remaining.front();
        if (remaining.size() > 1) {
            std::vector<Vector> std_cols(static_cast<std::size_t>(x.cols()));
            std::vector<double> entropy(static_cast<std::size_t>(x.cols()));
            for (auto i : remaining) {
                std_cols[i] = standardize(x.col(i), "series");
                entropy[i] = approx_entropy(std_cols[i]);
            }
            double best = std::numeric_limits<double>::infinity();
            for (auto i : remaining) {
                double m = 0.0;
                for (auto j : remaining) {
                    if (i == j) continue;
                    const Vector rij = standardize(residual(std_cols[i], std_cols[j]), "residual");
                    const Vector rji = standardize(residual(std_cols[j], std_cols[i]), "residual");
                    const double diff = (entropy[j] + approx_entropy(rij)) - (entropy[i] + approx_entropy(rji));
                    m += std::pow(std::min(0.0, diff), 2);
                }
                if (m < best) {
                    best = m;
                    root = i;
                }
            }
        }
        order.push_back(root);
        std::erase(remaining, root);
        for (auto i : remaining) x.col(i) = residual(x.col(i), x.col(root));
    }
    return order;
}

DiscoveryOutcome varlingam_discover(const TimeSeriesScene& scene, const MethodConfig& config) {
    config.validate();
    const int tau = config.max_lag;
    const Eigen::Index nv = scene.num_variables();
    detail::require_samples(scene, nv * tau + 10, "varlingam");
    const Matrix x = center_columns(scene.values());
    const auto idx = detail::all_indices(nv);
    const auto d = lagged_design(x, idx, idx, tau);
    const Eigen::Index n = d.design.rows();

    // (1) VAR by OLS and its residuals.
    const auto var = stats::ols_fit(d.design, d.response);
    const Matrix& e = var.residuals;

    auto out = detail::empty_outcome(scene);
    bool gaussian = true;
    for (Eigen::Index v = 0; v < nv; ++v) gaussian = gaussian && jarque_bera_p(e.col(v)) > config.alpha;
    if (gaussian) {
        out.notes.push_back("VAR residuals are consistent with Gaussian innovations; the causal order is not "
                            "identifiable");
    }

    // (2) causal order of the innovations.
    const auto order = direct_lingam_order(e);
    std::string order_text;
    for (auto v : order) order_text += (order_text.empty() ? "" : " < ") + scene.variable_names()[v];
    out.notes.push_back("causal order: " + order_text);

    // (3) instantaneous effects from the order; (4) corrected lag matrices.
    Matrix b0 = Matrix::Zero(nv, nv);
    for (std::size_t k = 1; k < order.size(); ++k) {
        Matrix pred(n, static_cast<Eigen::Index>(k));
        for (std::size_t j = 0; j < k; ++j) pred.col(static_cast<Eigen::Index>(j)) = e.col(order[j]);
        const auto fit = stats::ols_fit(pred, Vector(e.col(order[k])));
        for (std::size_t j = 0; j < k; ++j) b0(order[k], order[j]) = fit.coefficients(static_cast<Eigen::Index>(j));
    }
    const Matrix ib0 = Matrix::Identity(nv, nv) - b0;
    for (int l = 1; l <= tau; ++l) {
        Matrix a(nv, nv);
        for (Eigen::Index y = 0; y < nv; ++y) {
            for (Eigen::Index c = 0; c < nv; ++c) a(y, c) = var.coefficients(c * tau + l - 1, y);
        }
        const Matrix corrected = ib0 * a;
        for (Eigen::Index y = 0; y < nv; ++y) {
            for (Eigen::Index c = 0; c < nv; ++c) {
                out.diagnostics.push_back(detail::diag(scene, c, y, l, corrected(y, c), "corrected_coefficient"));
            }
        }
    }

    // (5) adaptive-lasso pruning per target: instantaneous ancestors plus all lags.
    LaggedCoefficients pruned(tau, nv);
    for (Eigen::Index y = 0; y < nv; ++y) {
        const auto pos = static_cast<Eigen::Index>(std::find(order.begin(), order.end(), y) - order.begin());
        Matrix z(n, pos + d.design.cols());
        for (Eigen::Index j = 0; j < pos; ++j) z.col(j) = x.col(order[j]).tail(n);
        z.rightCols(d.design.cols()) = d.design;
        const Vector target = d.response.col(y);

        Vector scale(z.cols());
        Matrix zs(n, z.cols());
        for (Eigen::Index j = 0; j < z.cols(); ++j) {
            const double sd = std::sqrt((z.col(j).array() - z.col(j).mean()).square().mean());
            scale(j) = sd > 0.0 ? sd : 1.0;
            zs.col(j) = (z.col(j).array() - z.col(j).mean()) / scale(j);
        }
        const double ysd = std::sqrt((target.array() - target.mean()).square().mean());
        if (!(ysd > 0.0)) throw DegenerateData("varlingam: zero-variance target " + scene.variable_names()[y]);
        const Vector ys = (target.array() - target.mean()) / ysd;

        const auto pilot = stats::ols_fit(zs, ys);
        const Vector w = stats::adaptive_weights(pilot.coefficients);
        const Vector grid = stats::lambda_grid(zs, ys, w);
        stats::SparseFit sparse;
        try {
            sparse = stats::adaptive_lasso(zs, ys, w, grid);
        } catch (const stats::ConvergenceError& err) {
            sparse = err.best_iterate();
            out.notes.push_back("pruning of " + scene.variable_names()[y] + " did not converge; using best iterate");
        }
        if (sparse.active_set.empty()) continue;
        Matrix sel(n, static_cast<Eigen::Index>(sparse.active_set.size()));
        for (std::size_t k = 0; k < sparse.active_set.size(); ++k) sel.col(static_cast<Eigen::Index>(k)) = z.col(sparse.active_set[k]);
        const auto refit = stats::ols_fit(sel, target);
        for (std::size_t k = 0; k < sparse.active_set.size(); ++k) {
            const Eigen::Index j = sparse.active_set[k] - pos;
            if (j < 0) continue;  // instantaneous term
            const Eigen::Index c = j / tau;
            const int l = static_cast<int>(j % tau) + 1;
            pruned.at(l)(y, c) = refit.coefficients(static_cast<Eigen::Index>(k));
        }
    }

    // (6) summary graph from surviving lagged coefficients.
    for (Eigen::Index y = 0; y < nv; ++y) {
        for (Eigen::Index c = 0; c < nv; ++c) {
            const double m = pruned.max_abs(y, c);
            out.diagnostics.push_back(detail::diag(scene, c, y, 0, m, "max_abs_coefficient"));
            if (c != y && m != 0.0) detail::add_edge(out, scene, c, y);
        }
    }
    out.lagged = std::move(pruned);
    return out;
}

}  // namespace tcd::discovery
