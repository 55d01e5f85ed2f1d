#pragma once

#include <Eigen/Dense>

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tcd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Variant { Acceleration, Velocity };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view s);

/// A named multivariate time series sampled at a fixed rate.
///
/// Rows of `values()` are time steps and columns are variables. The object is
/// immutable once constructed; the constructor enforces unique names, finite
/// values, at least two samples and a positive sample rate.
class TimeSeriesScene {
public:
    TimeSeriesScene(std::string scene_id, std::vector<std::string> variable_names,
                    double sample_rate_hz, Matrix values, Variant variant);

    const std::string& scene_id() const noexcept { return scene_id_; }
    const std::vector<std::string>& variable_names() const noexcept { return names_; }
    double sample_rate_hz() const noexcept { return rate_; }
    const Matrix& values() const noexcept { return values_; }
    Variant variant() const noexcept { return variant_; }

    Eigen::Index num_samples() const noexcept { return values_.rows(); }
    Eigen::Index num_variables() const noexcept { return values_.cols(); }

    /// Column index of a variable; throws InvalidArgument for unknown names.
    Eigen::Index index_of(std::string_view name) const;

    /// Same metadata, new sample matrix and rate.
    TimeSeriesScene with_values(Matrix values, double sample_rate_hz) const;

private:
    std::string scene_id_;
    std::vector<std::string> names_;
    double rate_;
    Matrix values_;
    Variant variant_;
};

using Edge = std::pair<std::string, std::string>;

/// Directed graph over named variables. Self-loops are allowed here and are
/// removed by the scoring code.
class SummaryGraph {
public:
    SummaryGraph() = default;
    explicit SummaryGraph(std::vector<std::string> nodes);

    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    const std::set<Edge>& edges() const noexcept { return edges_; }

    void add_edge(const std::string& source, const std::string& target);
    bool has_edge(const std::string& source, const std::string& target) const;
    bool has_node(std::string_view name) const;
    std::size_t size() const noexcept { return edges_.size(); }

    SummaryGraph without_self_loops() const;

    friend bool operator==(const SummaryGraph&, const SummaryGraph&) = default;

private:
    std::vector<std::string> nodes_;
    std::set<Edge> edges_;
};

/// Per-lag coefficient matrices. `at(lag)(i, j)` is the influence of variable
/// j at `lag` samples in the past on variable i now; lags run 1..max_lag.
class LaggedCoefficients {
public:
    LaggedCoefficients(int max_lag, Eigen::Index num_vars);
    explicit LaggedCoefficients(std::vector<Matrix> matrices);

    int max_lag() const noexcept { return static_cast<int>(matrices_.size()); }
    Eigen::Index num_vars() const noexcept { return matrices_.empty() ? 0 : matrices_.front().rows(); }

    Matrix& at(int lag);
    const Matrix& at(int lag) const;

    /// max over lags of |a(i, j)|.
    double max_abs(Eigen::Index target, Eigen::Index source) const;

private:
    std::vector<Matrix> matrices_;
};

/// Regression residuals of a lagged fit; rows are T - max_lag time steps.
struct ResidualSeries {
    Matrix values;
    int model_df = 0;
};

}  // namespace tcd
