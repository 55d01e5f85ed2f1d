#pragma once

#include "tcd/core/scene.hpp"
#include "tcd/discovery/method.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tcd::eval {

struct SceneScore {
    std::string scene_id;
    int tp = 0;
    int fp = 0;
    int fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    /// Wall-clock seconds of the discovery call; empty when not recorded.
    std::optional<double> runtime_s;
    bool error = false;
    std::string error_message;
    bool abstained = false;
};

/// Self-loops in `predicted` are ignored. Node sets must match.
SceneScore score_graph(const SummaryGraph& predicted, const SummaryGraph& truth);

struct SweepCell {
    std::string method;
    std::string dataset;
    Variant variant = Variant::Velocity;
    double alpha = 0.05;
    double max_lag_s = 0.0;
    int max_lag = 0;
    std::vector<SceneScore> scores;  ///< sorted by scene_id
    double mean_f1 = 0.0;
    double std_f1 = 0.0;  ///< population standard deviation
    double mean_precision = 0.0;
    double mean_recall = 0.0;
    std::optional<double> mean_runtime_s;
    int n_errors = 0;
};

/// Recompute the aggregate fields of `cell` from its scores.
void aggregate(SweepCell& cell);

struct EvaluateOptions {
    std::uint64_t seed = 0;  ///< scene k (in scene_id order) gets seed + k
    int jobs = 1;
    bool record_runtime = false;
};

/// Run a method over scenes and score each against `truth`. Method errors on a
/// scene become zero scores with the error flag set.
SweepCell evaluate_method(discovery::MethodId method, const std::vector<TimeSeriesScene>& scenes,
                          const SummaryGraph& truth, const discovery::MethodConfig& config,
                          const EvaluateOptions& options = {});

/// A directory of scene CSVs; `truth` comes from truth.txt ("src -> dst" lines)
/// or, failing that, the convoy ground truth when the names match.
struct Dataset {
    std::string name;
    std::vector<TimeSeriesScene> scenes;
};

/// Loads every *.csv in `dir` except manifest.csv, sorted by scene id.
Dataset load_dataset(const std::filesystem::path& dir, double sample_rate_hz);
SummaryGraph dataset_truth(const std::filesystem::path& dir, const std::vector<std::string>& names, Variant variant);

struct SweepSpec {
    std::vector<std::string> methods;
    std::vector<std::filesystem::path> scene_dirs;
    std::vector<Variant> variants;
    std::vector<double> alphas;
    std::vector<double> max_lags_s;
    bool paper_grid = false;
    double fixed_alpha = 0.05;     ///< held fixed for the lag sweep under paper_grid
    double fixed_max_lag_s = 2.5;  ///< held fixed for the alpha sweep under paper_grid
    double sample_rate_hz = 10.0;
    std::uint64_t base_seed = 0;
    int jobs = 1;
    bool record_runtime = false;
};

/// The (alpha, max_lag_s) pairs a sweep visits, sorted.
std::vector<std::pair<double, double>> sweep_grid(const SweepSpec& spec);

/// One cell per method x dataset x variant x grid point, in that nesting order.
std::vector<SweepCell> run_sweep(const SweepSpec& spec);

enum class ReportFormat { Csv, Json, Both };

/// summary.csv, detail.csv, report.json and plot_*.csv under `dir`.
void emit_report(const std::vector<SweepCell>& cells, ReportFormat format, const std::filesystem::path& dir,
                 const std::string& fingerprint = "", const std::string& canonical_config = "");

std::string summary_csv(const std::vector<SweepCell>& cells);
std::string detail_csv(const std::vector<SweepCell>& cells);

/// Parse an edge list with one "src -> dst" per line; blank lines and lines
/// starting with '#' are skipped.
std::vector<Edge> parse_edge_list(const std::string& text);
std::string format_edge_list(const SummaryGraph& graph);

/// 64-bit FNV-1a, hex encoded.
std::string fingerprint(const std::string& text);

}  // namespace tcd::eval
