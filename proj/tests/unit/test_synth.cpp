#include "tcd/core/error.hpp"
#include "tcd/core/scene_csv.hpp"
#include "tcd/discovery/method.hpp"
#include "tcd/synth/convoy.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tcd;
using namespace tcd::synth;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

SceneGenConfig quiet(Variant v) {
    SceneGenConfig c;
    c.variant = v;
    c.convoy_actions = 0;
    c.independent_actions = 0;
    c.start_velocity_bounds_mps = {20.0, 20.0};
    c.fixed_actuary_noise_mps2 = {0.0, 0.0};
    c.proportional_actuary_noise = {0.0, 0.0};
    c.fixed_sensory_noise_m = {0.0, 0.0};
    c.proportional_sensory_noise = {0.0, 0.0};
    return c;
}

}  // namespace

TEST_CASE("a noiseless convoy without goal changes settles at the safe gap") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto c = quiet(Variant::Acceleration);
        c.seed = seed;
        const auto g = generate_scene(c);
        const Matrix& a = g.scene.values();
        CHECK(a.col(0).cwiseAbs().maxCoeff() == 0.0);
        CHECK(a.col(2).cwiseAbs().maxCoeff() == 0.0);
        CHECK(a.col(1).tail(100).cwiseAbs().maxCoeff() < 1e-3);

        c.variant = Variant::Velocity;
        const auto v = generate_scene(c).scene.values();
        CHECK((v.col(0).array() == 20.0).all());
        CHECK(v(v.rows() - 1, 1) == doctest::Approx(20.0).epsilon(1e-4));
        CHECK(g.min_gap_m > 0.0);
    }
}

TEST_CASE("default scenes respect the configured ranges") {
    SceneGenConfig c;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        c.seed = seed;
        c.variant = seed % 2 ? Variant::Acceleration : Variant::Velocity;
        const auto g = generate_scene(c);
        CHECK(g.duration_s >= 50.0);
        CHECK(g.duration_s <= 70.0);
        CHECK(g.scene.num_samples() >= 500);
        CHECK(g.scene.num_samples() <= 700);
        CHECK(g.convoy_schedule.size() == 12);
        CHECK(g.independent_schedule.size() == 12);
        for (std::size_t k = 1; k < 12; ++k) {
            CHECK(g.convoy_schedule[k].step - g.convoy_schedule[k - 1].step >= 10);
            CHECK(g.independent_schedule[k].step - g.independent_schedule[k - 1].step >= 10);
        }
        CHECK(g.realized_noise.fixed_actuary >= 0.1);
        CHECK(g.realized_noise.fixed_actuary <= 1.6);
        CHECK(g.realized_noise.proportional_sensory >= 0.005);
        CHECK(g.realized_noise.proportional_sensory <= 0.08);
        CHECK(g.min_gap_m > 0.0);
        const Matrix& x = g.scene.values();
        if (c.variant == Variant::Velocity) {
            CHECK(x.minCoeff() >= 0.0);
            CHECK(x.maxCoeff() <= 44.7);
        } else {
            CHECK(x.minCoeff() >= -6.56);
            CHECK(x.maxCoeff() <= 3.5);
        }
        CHECK(g.ground_truth.size() == 1);
        CHECK(g.ground_truth.has_edge(g.scene.variable_names()[0], g.scene.variable_names()[1]));
    }
}

TEST_CASE("generation is deterministic and batches follow the seed rule") {
    SceneGenConfig c;
    c.seed = 77;
    const auto a = generate_scene(c, "x");
    const auto b = generate_scene(c, "x");
    CHECK(a.scene.values() == b.scene.values());

    const auto dir1 = std::filesystem::temp_directory_path() / "tcd_batch_1";
    const auto dir2 = std::filesystem::temp_directory_path() / "tcd_batch_2";
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
    const auto one = generate_batch(c, 1, dir1);
    CHECK(one.front().scene.values() == a.scene.values());
    generate_batch(c, 3, dir1);
    generate_batch(c, 3, dir2);
    for (const char* f : {"velocity_0000.csv", "velocity_0001.csv", "velocity_0002.csv", "manifest.csv"}) {
        CHECK(slurp(dir1 / f) == slurp(dir2 / f));
    }
    auto c1 = c;
    c1.seed = 78;
    CHECK(load_scene_csv(dir1 / "velocity_0001.csv", 10.0).values() == generate_scene(c1).scene.values());
    const auto manifest = slurp(dir1 / "manifest.csv");
    CHECK(std::count(manifest.begin(), manifest.end(), '\n') == 4);
    CHECK(manifest.find("velocity_0002,79,") != std::string::npos);
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("infeasible configurations are rejected") {
    SceneGenConfig c;
    c.convoy_actions = 60;
    CHECK_THROWS_AS(generate_scene(c), InvalidArgument);
    c = SceneGenConfig{};
    c.start_velocity_bounds_mps = {0.0, 50.0};
    CHECK_THROWS_AS(generate_scene(c), InvalidArgument);
    c = SceneGenConfig{};
    c.duration_range_s = {70.0, 50.0};
    CHECK_THROWS_AS(generate_scene(c), InvalidArgument);
    CHECK_THROWS_AS(generate_batch(SceneGenConfig{}, 0, std::filesystem::temp_directory_path()), InvalidArgument);
}

TEST_CASE("the independent agent is not linked by a calibrated test") {
    SceneGenConfig c;
    discovery::MethodConfig m;
    m.alpha = 0.05;
    m.max_lag = 25;
    const int scenes = 200;
    std::array<int, 4> hits{};
    for (int k = 0; k < scenes; ++k) {
        c.seed = 5000 + static_cast<std::uint64_t>(k);
        c.variant = k % 2 ? Variant::Acceleration : Variant::Velocity;
        const auto g = generate_scene(c);
        const auto& n = g.scene.variable_names();
        const auto o = discovery::pwgc_discover(g.scene, m);
        hits[0] += o.graph.has_edge(n[2], n[0]);
        hits[1] += o.graph.has_edge(n[2], n[1]);
        hits[2] += o.graph.has_edge(n[0], n[2]);
        hits[3] += o.graph.has_edge(n[1], n[2]);
    }
    for (int h : hits) {
        CAPTURE(h);
        CHECK(h / double(scenes) <= 0.05 + 3 * std::sqrt(0.05 * 0.95 / scenes));
    }
}
