// tcd: generate convoy scenes, run discovery on one scene, or sweep methods over scene directories.

#include "tcd/core/error.hpp"
#include "tcd/core/scene_csv.hpp"
#include "tcd/discovery/method.hpp"
#include "tcd/eval/harness.hpp"
#include "tcd/synth/convoy.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr const char* kVersion = "1.0.0";

using namespace tcd;

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (double d : v) out += (out.empty() ? "" : ",") + format_double(d);
    return out;
}

void add_generate(CLI::App& app, synth::SceneGenConfig& c, int& count, std::string& variant, std::string& out_dir) {
    auto* g = app.add_subcommand("generate", "Generate a batch of synthetic convoy scenes");
    g->add_option("--count", count, "Number of scenes")->check(CLI::PositiveNumber)->capture_default_str();
    g->add_option("--variant", variant, "acceleration or velocity")
        ->check(CLI::IsMember({"acceleration", "velocity"}))
        ->capture_default_str();
    g->add_option("--out-dir", out_dir, "Output directory")->required();
    g->add_option("--seed", c.seed, "Base seed; scene i uses seed + i")->capture_default_str();
    g->add_option("--frequency-hz", c.frequency_hz)->capture_default_str();
    g->add_option("--duration-range-s", c.duration_range_s)->capture_default_str();
    g->add_option("--convoy-actions", c.convoy_actions)->capture_default_str();
    g->add_option("--independent-actions", c.independent_actions)->capture_default_str();
    g->add_option("--min-convoy-distance-m", c.min_convoy_distance_m)->capture_default_str();
    g->add_option("--max-convoy-distance-m", c.max_convoy_distance_m)->capture_default_str();
    g->add_option("--proportional-gain", c.proportional_gain)->capture_default_str();
    g->add_option("--integral-gain", c.integral_gain)->capture_default_str();
    g->add_option("--derivative-gain", c.derivative_gain)->capture_default_str();
    g->add_option("--min-action-interval-s", c.min_action_interval_s)->capture_default_str();
    g->add_option("--velocity-bounds-mps", c.velocity_bounds_mps)->capture_default_str();
    g->add_option("--start-velocity-bounds-mps", c.start_velocity_bounds_mps)->capture_default_str();
    g->add_option("--acceleration-bounds-mps2", c.acceleration_bounds_mps2)->capture_default_str();
    g->add_option("--safe-distance-over-velocity-s", c.safe_distance_over_velocity_s)->capture_default_str();
    g->add_option("--reaction-time-s", c.reaction_time_s)->capture_default_str();
    g->add_option("--fixed-actuary-noise-mps2", c.fixed_actuary_noise_mps2, "Range, drawn per scene")
        ->capture_default_str();
    g->add_option("--proportional-actuary-noise", c.proportional_actuary_noise, "Range, drawn per scene")
        ->capture_default_str();
    g->add_option("--fixed-sensory-noise-m", c.fixed_sensory_noise_m, "Range, drawn per scene")
        ->capture_default_str();
    g->add_option("--proportional-sensory-noise", c.proportional_sensory_noise, "Range, drawn per scene")
        ->capture_default_str();
    g->add_option("--max-attempts", c.max_attempts, "Redraws allowed after a collision")->capture_default_str();
}

struct DiscoverArgs {
    std::string method;
    std::string scene;
    double alpha = 0.05;
    double max_lag_s = 2.5;
    double rate_hz = 10.0;
    std::uint64_t seed = 0;
    std::string graph_out;
    std::string variant;
    std::vector<std::string> params;
};

int run_discover(const DiscoverArgs& a) {
    const auto method = discovery::parse_method(a.method);
    std::optional<Variant> variant;
    if (!a.variant.empty()) variant = parse_variant(a.variant);
    const auto scene = load_scene_csv(a.scene, a.rate_hz, variant);
    discovery::MethodConfig cfg;
    cfg.alpha = a.alpha;
    cfg.max_lag = static_cast<int>(std::llround(a.max_lag_s * a.rate_hz));
    for (const auto& kv : a.params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InvalidArgument("--param expects key=value, got '" + kv + "'");
        cfg.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    const auto out = discovery::discover(method, scene, cfg, a.seed);
    const auto text = eval::format_edge_list(out.graph);
    std::cout << "# scene " << scene.scene_id() << ", method " << a.method << ", alpha " << format_double(cfg.alpha)
              << ", max_lag " << cfg.max_lag << "\n";
    if (out.abstained) std::cout << "# abstained\n";
    std::cout << text;
    for (const auto& n : out.notes) std::cout << "# note: " << n << "\n";
    for (const auto& d : out.diagnostics) {
        if (d.source == d.target) continue;
        std::cout << "# " << d.source << " -> " << d.target;
        if (d.lag > 0) std::cout << " lag " << d.lag;
        std::cout << ' ' << d.kind << ' ' << format_double(d.value) << "\n";
    }
    if (!a.graph_out.empty()) {
        std::ofstream f(a.graph_out, std::ios::binary);
        f << text;
        if (!f) throw IoError("cannot write " + a.graph_out);
    }
    return 0;
}

struct SweepArgs {
    std::vector<std::string> methods;
    std::vector<std::string> scene_dirs;
    std::vector<std::string> variants{"velocity", "acceleration"};
    std::vector<double> alphas{0.001, 0.005, 0.01, 0.03, 0.05, 0.1};
    std::vector<double> max_lags_s{2.5, 3.6, 4.9};
    bool paper_grid = false;
    std::string report_dir = "reports";
    std::uint64_t seed = 0;
    int jobs = 1;
    double rate_hz = 10.0;
    std::string format = "both";
    bool record_runtime = false;
};

int run_sweep_cmd(const SweepArgs& a) {
    eval::SweepSpec spec;
    spec.methods = a.methods;
    for (const auto& d : a.scene_dirs) spec.scene_dirs.emplace_back(d);
    for (const auto& v : a.variants) spec.variants.push_back(parse_variant(v));
    spec.alphas = a.alphas;
    spec.max_lags_s = a.max_lags_s;
    spec.paper_grid = a.paper_grid;
    spec.sample_rate_hz = a.rate_hz;
    spec.base_seed = a.seed;
    spec.jobs = a.jobs;
    spec.record_runtime = a.record_runtime;

    // Execution-only settings (--jobs, --report-dir) stay out of the fingerprint.
    std::ostringstream canon;
    canon << "version=" << kVersion << "\nmethods=" << join(a.methods) << "\nscene_dirs=" << join(a.scene_dirs)
          << "\nvariants=" << join(a.variants) << "\nalphas=" << join(a.alphas)
          << "\nmax_lags_s=" << join(a.max_lags_s) << "\npaper_grid=" << (a.paper_grid ? "true" : "false")
          << "\nrate_hz=" << format_double(a.rate_hz) << "\nseed=" << a.seed
          << "\nrecord_runtime=" << (a.record_runtime ? "true" : "false") << "\n";
    const auto fp = eval::fingerprint(canon.str());

    const auto cells = eval::run_sweep(spec);
    const auto fmt = a.format == "csv" ? eval::ReportFormat::Csv
                     : a.format == "json" ? eval::ReportFormat::Json
                                          : eval::ReportFormat::Both;
    eval::emit_report(cells, fmt, a.report_dir, fp, canon.str());
    int errors = 0;
    for (const auto& c : cells) errors += c.n_errors;
    std::cout << cells.size() << " cells written to " << a.report_dir << " (fingerprint " << fp << ")\n";
    if (errors) std::cout << errors << " scene evaluation(s) failed and scored 0; see detail.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal causal discovery benchmark: scene generation, discovery and parameter sweeps"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "Read options from an INI/TOML file");
    app.require_subcommand(1);

    synth::SceneGenConfig gen;
    int count = 100;
    std::string gen_variant = "velocity";
    std::string out_dir;
    add_generate(app, gen, count, gen_variant, out_dir);

    DiscoverArgs da;
    auto* d = app.add_subcommand("discover", "Run one discovery method on one scene CSV");
    d->add_option("--method", da.method, "One of " + [] {
        std::string s;
        for (const auto& m : discovery::method_names()) s += (s.empty() ? "" : ", ") + m;
        return s;
    }())->required();
    d->add_option("--scene", da.scene, "Scene CSV file")->required()->check(CLI::ExistingFile);
    d->add_option("--alpha", da.alpha, "Significance level")->capture_default_str();
    d->add_option("--max-lag-s", da.max_lag_s, "Maximum lag in seconds")->capture_default_str();
    d->add_option("--rate-hz", da.rate_hz, "Sample rate of the scene")->capture_default_str();
    d->add_option("--seed", da.seed, "Seed for randomized methods")->capture_default_str();
    d->add_option("--variant", da.variant, "Override the variant inferred from the header");
    d->add_option("--param", da.params, "Method parameter key=value (repeatable)");
    d->add_option("--graph-out", da.graph_out, "Write the graph as 'src -> dst' lines");

    SweepArgs sa;
    auto* s = app.add_subcommand("sweep", "Evaluate methods over scene directories and parameter grids");
    s->add_option("--methods", sa.methods, "Method identifiers")->required()->delimiter(',');
    s->add_option("--scene-dirs", sa.scene_dirs, "Scene directories, one dataset each")->required()->delimiter(',');
    s->add_option("--variants", sa.variants)->delimiter(',')->capture_default_str();
    s->add_option("--alphas", sa.alphas)->delimiter(',')->capture_default_str();
    s->add_option("--max-lags-s", sa.max_lags_s)->delimiter(',')->capture_default_str();
    s->add_flag("--paper-grid", sa.paper_grid, "Vary alpha at 2.5 s and the lag at alpha 0.05 instead of the cross product");
    s->add_option("--report-dir", sa.report_dir)->envname("TCD_REPORT_DIR")->capture_default_str();
    s->add_option("--seed", sa.seed, "Base seed for randomized methods")->capture_default_str();
    s->add_option("--jobs", sa.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    s->add_option("--rate-hz", sa.rate_hz, "Sample rate of the scenes")->capture_default_str();
    s->add_option("--format", sa.format)->check(CLI::IsMember({"csv", "json", "both"}))->capture_default_str();
    s->add_flag("--record-runtime", sa.record_runtime, "Fill runtime columns with wall-clock seconds");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("generate")) {
            gen.variant = parse_variant(gen_variant);
            const auto scenes = synth::generate_batch(gen, count, out_dir);
            for (const auto& g : scenes) {
                if (g.attempts > 1) {
                    std::cerr << "note: " << g.scene.scene_id() << " regenerated " << g.attempts - 1
                              << " time(s) after collisions\n";
                }
            }
            std::cout << (std::filesystem::path(out_dir) / "manifest.csv").string() << "\n";
            return 0;
        }
        if (app.got_subcommand("discover")) return run_discover(da);
        return run_sweep_cmd(sa);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
