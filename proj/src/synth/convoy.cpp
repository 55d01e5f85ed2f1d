#include "tcd/synth/convoy.hpp"

#include "tcd/core/error.hpp"
#include "tcd/core/scene_csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace tcd::synth {
namespace {

void check_range(const Range& r, const char* name) {
    if (!std::isfinite(r.first) || !std::isfinite(r.second) || r.first > r.second) {
        throw InvalidArgument(std::string("scene config: invalid range for ") + name);
    }
}

double uniform(std::mt19937_64& rng, const Range& r) {
    if (r.first == r.second) return r.first;
    return std::uniform_real_distribution<double>(r.first, r.second)(rng);
}

std::vector<GoalChange> schedule(std::mt19937_64& rng, const SceneGenConfig& c, Eigen::Index steps, int actions) {
    std::vector<GoalChange> out;
    if (actions == 0) return out;
    const auto min_gap = static_cast<Eigen::Index>(std::ceil(c.min_action_interval_s * c.frequency_hz - 1e-9));
    const Eigen::Index slot = steps / actions;
    if (slot < min_gap) throw InvalidArgument("scene config: action schedule does not fit the scene duration");
    for (int k = 0; k < actions; ++k) {
        std::uniform_int_distribution<Eigen::Index> jitter(0, slot - min_gap);
        const Eigen::Index step = k * slot + jitter(rng);
        out.push_back({step, uniform(rng, c.velocity_bounds_mps)});
    }
    return out;
}

class Pid {
public:
    Pid(const SceneGenConfig& c, double dt) : kp_(c.proportional_gain), ki_(c.integral_gain), kd_(c.derivative_gain), dt_(dt) {}
    double operator()(double error) {
        integral_ += error * dt_;
        const double deriv = first_ ? 0.0 : (error - prev_) / dt_;
        first_ = false;
        prev_ = error;
        return kp_ * error + ki_ * integral_ + kd_ * deriv;
    }

private:
    double kp_, ki_, kd_, dt_;
    double integral_ = 0.0;
    double prev_ = 0.0;
    bool first_ = true;
};

std::mt19937_64 attempt_rng(std::uint64_t seed, int attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(attempt)};
    return std::mt19937_64(seq);
}

struct Draw {
    Matrix values;
    NoiseParams noise;
    double duration = 0.0;
    std::vector<GoalChange> s0, si;
    double min_gap = 0.0;
    bool collided = false;
};

Draw simulate(const SceneGenConfig& c, std::mt19937_64& rng) {
    Draw d;
    const double dt = 1.0 / c.frequency_hz;
    d.duration = uniform(rng, c.duration_range_s);
    const auto steps = static_cast<Eigen::Index>(std::llround(d.duration * c.frequency_hz));
    if (steps < 2) throw InvalidArgument("scene config: duration shorter than two samples");
    d.noise = {uniform(rng, c.fixed_actuary_noise_mps2), uniform(rng, c.proportional_actuary_noise),
               uniform(rng, c.fixed_sensory_noise_m), uniform(rng, c.proportional_sensory_noise)};
    d.s0 = schedule(rng, c, steps, c.convoy_actions);
    d.si = schedule(rng, c, steps, c.independent_actions);

    const auto [amin, amax] = c.acceleration_bounds_mps2;
    const auto [vmin, vmax] = c.velocity_bounds_mps;
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto actuate = [&](double cmd) {
        cmd = std::clamp(cmd, amin, amax);
        const double sd = d.noise.fixed_actuary + d.noise.proportional_actuary * std::abs(cmd);
        return std::clamp(cmd + sd * gauss(rng), amin, amax);
    };

    double v0 = uniform(rng, c.start_velocity_bounds_mps);
    double vi = uniform(rng, c.start_velocity_bounds_mps);
    double v1 = v0;
    double x0 = std::uniform_real_distribution<double>(c.min_convoy_distance_m, c.max_convoy_distance_m)(rng);
    double x1 = 0.0;
    double g0 = v0;
    double gi = vi;
    const auto delay = static_cast<Eigen::Index>(std::llround(c.reaction_time_s * c.frequency_hz));
    std::vector<double> x0_hist;
    x0_hist.reserve(static_cast<std::size_t>(steps));
    Pid pid0(c, dt), pidi(c, dt), pid1(c, dt);
    std::size_t k0 = 0, ki = 0;

    d.values.resize(steps, 3);
    d.min_gap = x0 - x1;
    for (Eigen::Index t = 0; t < steps; ++t) {
        if (k0 < d.s0.size() && d.s0[k0].step == t) g0 = d.s0[k0++].goal_mps;
        if (ki < d.si.size() && d.si[ki].step == t) gi = d.si[ki++].goal_mps;
        x0_hist.push_back(x0);

        // c1 sees where c0 was `delay` samples ago, through a noisy range sensor.
        const double seen = x0_hist[static_cast<std::size_t>(std::max<Eigen::Index>(0, t - delay))];
        const double gap = seen - x1;
        const double gap_obs = gap + (d.noise.fixed_sensory + d.noise.proportional_sensory * std::abs(gap)) * gauss(rng);

        const double a0 = actuate(pid0(g0 - v0));
        const double ai = actuate(pidi(gi - vi));
        const double a1 = actuate(pid1(gap_obs - c.safe_distance_over_velocity_s * v1));

        const double n0 = std::clamp(v0 + a0 * dt, vmin, vmax);
        const double n1 = std::clamp(v1 + a1 * dt, vmin, vmax);
        const double ni = std::clamp(vi + ai * dt, vmin, vmax);
        if (c.variant == Variant::Acceleration) {
            d.values.row(t) << std::clamp((n0 - v0) / dt, amin, amax), std::clamp((n1 - v1) / dt, amin, amax),
                std::clamp((ni - vi) / dt, amin, amax);
        } else {
            d.values.row(t) << n0, n1, ni;
        }
        v0 = n0;
        v1 = n1;
        vi = ni;
        x0 += v0 * dt;
        x1 += v1 * dt;
        d.min_gap = std::min(d.min_gap, x0 - x1);
        if (x0 - x1 <= 0.0) {
            d.collided = true;
            return d;
        }
    }
    return d;
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

void SceneGenConfig::validate() const {
    if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz)) throw InvalidArgument("scene config: frequency must be > 0");
    check_range(duration_range_s, "duration_range_s");
    check_range(velocity_bounds_mps, "velocity_bounds_mps");
    check_range(start_velocity_bounds_mps, "start_velocity_bounds_mps");
    check_range(acceleration_bounds_mps2, "acceleration_bounds_mps2");
    check_range(fixed_actuary_noise_mps2, "fixed_actuary_noise_mps2");
    check_range(proportional_actuary_noise, "proportional_actuary_noise");
    check_range(fixed_sensory_noise_m, "fixed_sensory_noise_m");
    check_range(proportional_sensory_noise, "proportional_sensory_noise");
    check_range({min_convoy_distance_m, max_convoy_distance_m}, "convoy distance");
    if (duration_range_s.first <= 0.0) throw InvalidArgument("scene config: durations must be positive");
    if (min_convoy_distance_m <= 0.0) throw InvalidArgument("scene config: convoy distance must be positive");
    if (start_velocity_bounds_mps.first < velocity_bounds_mps.first ||
        start_velocity_bounds_mps.second > velocity_bounds_mps.second) {
        throw InvalidArgument("scene config: start velocity bounds must lie within velocity bounds");
    }
    for (double g : {proportional_gain, integral_gain, derivative_gain, safe_distance_over_velocity_s,
                     reaction_time_s, min_action_interval_s}) {
        if (!std::isfinite(g)) throw InvalidArgument("scene config: non-finite gain or time constant");
    }
    if (reaction_time_s < 0.0 || min_action_interval_s < 0.0) throw InvalidArgument("scene config: negative time");
    if (fixed_actuary_noise_mps2.first < 0.0 || proportional_actuary_noise.first < 0.0 ||
        fixed_sensory_noise_m.first < 0.0 || proportional_sensory_noise.first < 0.0) {
        throw InvalidArgument("scene config: noise levels must be non-negative");
    }
    if (convoy_actions < 0 || independent_actions < 0) throw InvalidArgument("scene config: negative action count");
    const int actions = std::max(convoy_actions, independent_actions);
    if (actions * min_action_interval_s > duration_range_s.first) {
        throw InvalidArgument("scene config: action schedule infeasible (actions x min interval exceeds the "
                              "minimum duration)");
    }
    if (max_attempts < 1) throw InvalidArgument("scene config: max_attempts must be >= 1");
}

std::vector<std::string> convoy_variable_names(Variant variant) {
    const std::string s = variant == Variant::Acceleration ? ".a" : ".v";
    return {"c0" + s, "c1" + s, "i0" + s};
}

SummaryGraph convoy_ground_truth(Variant variant) {
    const auto names = convoy_variable_names(variant);
    SummaryGraph g(names);
    g.add_edge(names[0], names[1]);
    return g;
}

GeneratedScene generate_scene(const SceneGenConfig& config, const std::string& scene_id) {
    config.validate();
    for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
        auto rng = attempt_rng(config.seed, attempt);
        auto d = simulate(config, rng);
        if (d.collided) continue;
        GeneratedScene g{TimeSeriesScene(scene_id, convoy_variable_names(config.variant), config.frequency_hz,
                                         std::move(d.values), config.variant),
                         convoy_ground_truth(config.variant),
                         config.seed,
                         d.noise,
                         d.duration,
                         attempt + 1,
                         std::move(d.s0),
                         std::move(d.si),
                         d.min_gap};
        return g;
    }
    throw DegenerateData("scene generation: every attempt for seed " + std::to_string(config.seed) +
                         " ended in a collision");
}

std::vector<GeneratedScene> generate_batch(const SceneGenConfig& config, int count,
                                           const std::filesystem::path& out_dir) {
    if (count < 1) throw InvalidArgument("generate_batch: count must be >= 1");
    config.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    const int width = std::max(4, static_cast<int>(std::to_string(count - 1).size()));
    std::vector<GeneratedScene> scenes;
    std::ostringstream manifest;
    manifest << "scene_id,seed,attempts,duration_s,samples,fixed_actuary_noise_mps2,proportional_actuary_noise,"
                "fixed_sensory_noise_m,proportional_sensory_noise,min_gap_m\n";
    for (int i = 0; i < count; ++i) {
        auto c = config;
        c.seed = config.seed + static_cast<std::uint64_t>(i);
        std::ostringstream id;
        id << to_string(config.variant) << '_' << std::setw(width) << std::setfill('0') << i;
        auto g = generate_scene(c, id.str());
        save_scene_csv(g.scene, out_dir / (id.str() + ".csv"));
        manifest << id.str() << ',' << g.seed << ',' << g.attempts << ',' << fmt(g.duration_s) << ','
                 << g.scene.num_samples() << ',' << fmt(g.realized_noise.fixed_actuary) << ','
                 << fmt(g.realized_noise.proportional_actuary) << ',' << fmt(g.realized_noise.fixed_sensory) << ','
                 << fmt(g.realized_noise.proportional_sensory) << ',' << fmt(g.min_gap_m) << '\n';
        scenes.push_back(std::move(g));
    }
    std::ofstream f(out_dir / "manifest.csv", std::ios::binary);
    f << manifest.str();
    if (!f) throw IoError("cannot write " + (out_dir / "manifest.csv").string());
    return scenes;
}

}  // namespace tcd::synth
