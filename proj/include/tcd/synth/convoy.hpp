#pragma once

#include "tcd/core/scene.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace tcd::synth {

using Range = std::pair<double, double>;

/// Generation parameters for the two-agent convoy with one independent agent.
/// Noise fields are ranges; each scene draws one value per range.
struct SceneGenConfig {
    Variant variant = Variant::Velocity;
    double frequency_hz = 10.0;
    Range duration_range_s{50.0, 70.0};
    int convoy_actions = 12;
    int independent_actions = 12;
    double min_convoy_distance_m = 10.0;
    double max_convoy_distance_m = 100.0;
    double proportional_gain = 1.0;
    double integral_gain = 0.0;
    double derivative_gain = 0.0;
    double min_action_interval_s = 1.0;
    Range velocity_bounds_mps{0.0, 44.7};
    Range start_velocity_bounds_mps{4.47, 26.8};
    Range acceleration_bounds_mps2{-6.56, 3.5};
    double safe_distance_over_velocity_s = 2.24;
    double reaction_time_s = 0.5;
    Range fixed_actuary_noise_mps2{0.1, 1.6};
    Range proportional_actuary_noise{0.1, 1.6};
    Range fixed_sensory_noise_m{0.01, 0.16};
    Range proportional_sensory_noise{0.005, 0.08};
    std::uint64_t seed = 0;
    /// Regeneration attempts allowed when a draw ends in a collision.
    int max_attempts = 100;

    void validate() const;
};

struct NoiseParams {
    double fixed_actuary = 0.0;
    double proportional_actuary = 0.0;
    double fixed_sensory = 0.0;
    double proportional_sensory = 0.0;
};

struct GoalChange {
    Eigen::Index step = 0;
    double goal_mps = 0.0;
};

struct GeneratedScene {
    TimeSeriesScene scene;
    SummaryGraph ground_truth;
    std::uint64_t seed = 0;
    NoiseParams realized_noise;
    double duration_s = 0.0;
    /// 1 when the first draw was collision-free.
    int attempts = 1;
    std::vector<GoalChange> convoy_schedule;
    std::vector<GoalChange> independent_schedule;
    /// Minimum c0 - c1 gap over the run, metres.
    double min_gap_m = 0.0;
};

/// Simulate one scene from `config.seed`. Collisions trigger a redraw from a
/// seed derived from (seed, attempt); the attempt count is reported.
GeneratedScene generate_scene(const SceneGenConfig& config, const std::string& scene_id = "scene");

/// Scene i uses seed config.seed + i and is written to
/// `<out_dir>/<variant>_<i>.csv`; a manifest.csv records seeds and noise draws.
std::vector<GeneratedScene> generate_batch(const SceneGenConfig& config, int count,
                                           const std::filesystem::path& out_dir);

/// Variable names for a variant, in column order c0, c1, i0.
std::vector<std::string> convoy_variable_names(Variant variant);

/// The ground-truth graph {c0 -> c1}.
SummaryGraph convoy_ground_truth(Variant variant);

}  // namespace tcd::synth
