#include "tcd/core/scene.hpp"

#include "tcd/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace tcd {

std::string_view to_string(Variant v) {
    return v == Variant::Acceleration ? "acceleration" : "velocity";
}

Variant parse_variant(std::string_view s) {
    if (s == "acceleration" || s == "a") return Variant::Acceleration;
    if (s == "velocity" || s == "v") return Variant::Velocity;
    throw InvalidArgument("unknown variant '" + std::string(s) + "' (expected acceleration|velocity)");
}

TimeSeriesScene::TimeSeriesScene(std::string scene_id, std::vector<std::string> variable_names,
                                 double sample_rate_hz, Matrix values, Variant variant)
    : scene_id_(std::move(scene_id)),
      names_(std::move(variable_names)),
      rate_(sample_rate_hz),
      values_(std::move(values)),
      variant_(variant) {
    if (!(rate_ > 0.0) || !std::isfinite(rate_)) {
        throw InvalidArgument("sample rate must be positive");
    }
    if (static_cast<Eigen::Index>(names_.size()) != values_.cols()) {
        throw InvalidArgument("scene '" + scene_id_ + "': " + std::to_string(names_.size()) +
                              " names for " + std::to_string(values_.cols()) + " columns");
    }
    if (names_.empty()) throw InvalidArgument("scene '" + scene_id_ + "' has no variables");
    if (values_.rows() < 2) throw InvalidArgument("scene '" + scene_id_ + "' needs at least 2 samples");
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
        if (!seen.insert(n).second) throw InvalidArgument("duplicate variable name '" + n + "'");
    }
    if (!values_.allFinite()) throw InvalidArgument("scene '" + scene_id_ + "' contains non-finite values");
}

Eigen::Index TimeSeriesScene::index_of(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw InvalidArgument("unknown variable '" + std::string(name) + "'");
    return it - names_.begin();
}

TimeSeriesScene TimeSeriesScene::with_values(Matrix values, double sample_rate_hz) const {
    return TimeSeriesScene(scene_id_, names_, sample_rate_hz, std::move(values), variant_);
}

SummaryGraph::SummaryGraph(std::vector<std::string> nodes) : nodes_(std::move(nodes)) {}

void SummaryGraph::add_edge(const std::string& source, const std::string& target) {
    if (!has_node(source) || !has_node(target)) {
        throw InvalidArgument("edge " + source + " -> " + target + " references an unknown node");
    }
    edges_.emplace(source, target);
}

bool SummaryGraph::has_edge(const std::string& source, const std::string& target) const {
    return edges_.count({source, target}) > 0;
}

bool SummaryGraph::has_node(std::string_view name) const {
    return std::find(nodes_.begin(), nodes_.end(), name) != nodes_.end();
}

SummaryGraph SummaryGraph::without_self_loops() const {
    SummaryGraph g(nodes_);
    for (const auto& e : edges_) {
        if (e.first != e.second) g.edges_.insert(e);
    }
    return g;
}

LaggedCoefficients::LaggedCoefficients(int max_lag, Eigen::Index num_vars) {
    if (max_lag < 1) throw InvalidArgument("max_lag must be >= 1");
    matrices_.assign(static_cast<std::size_t>(max_lag), Matrix::Zero(num_vars, num_vars));
}

LaggedCoefficients::LaggedCoefficients(std::vector<Matrix> matrices) : matrices_(std::move(matrices)) {
    if (matrices_.empty()) throw InvalidArgument("max_lag must be >= 1");
    const auto n = matrices_.front().rows();
    for (const auto& m : matrices_) {
        if (m.rows() != n || m.cols() != n) throw InvalidArgument("lag matrices must all be NxN");
        if (!m.allFinite()) throw InvalidArgument("lag coefficients must be finite");
    }
}

Matrix& LaggedCoefficients::at(int lag) {
    if (lag < 1 || lag > max_lag()) throw InvalidArgument("lag out of range");
    return matrices_[static_cast<std::size_t>(lag - 1)];
}

const Matrix& LaggedCoefficients::at(int lag) const {
    if (lag < 1 || lag > max_lag()) throw InvalidArgument("lag out of range");
    return matrices_[static_cast<std::size_t>(lag - 1)];
}

double LaggedCoefficients::max_abs(Eigen::Index target, Eigen::Index source) const {
    double m = 0.0;
    for (const auto& a : matrices_) m = std::max(m, std::abs(a(target, source)));
    return m;
}

}  // namespace tcd
