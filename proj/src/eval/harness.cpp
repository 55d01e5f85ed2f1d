#include "tcd/eval/harness.hpp"

#include "tcd/core/error.hpp"
#include "tcd/core/scene_csv.hpp"
#include "tcd/synth/convoy.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

namespace tcd::eval {
namespace {

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
    const auto workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

SceneScore run_one(discovery::MethodId method, const TimeSeriesScene& scene, const SummaryGraph& truth,
                   const discovery::MethodConfig& config, std::uint64_t seed, bool record_runtime) {
    SceneScore s;
    const auto start = std::chrono::steady_clock::now();
    try {
        auto cfg = config;
        const auto out = discovery::discover(method, scene, cfg, seed);
        const auto stop = std::chrono::steady_clock::now();
        s = score_graph(out.graph, truth);
        s.abstained = out.abstained;
        if (record_runtime) s.runtime_s = std::chrono::duration<double>(stop - start).count();
    } catch (const std::exception& e) {
        const auto stop = std::chrono::steady_clock::now();
        s = SceneScore{};
        s.fn = static_cast<int>(truth.without_self_loops().size());
        s.error = true;
        s.error_message = e.what();
        if (record_runtime) s.runtime_s = std::chrono::duration<double>(stop - start).count();
    }
    s.scene_id = scene.scene_id();
    return s;
}

std::string num(double v) { return format_double(v); }
std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

int lag_samples(double lag_s, double rate) {
    const auto tau = static_cast<int>(std::llround(lag_s * rate));
    if (tau < 1) throw InvalidArgument("max lag of " + num(lag_s) + " s is below one sample");
    return tau;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) throw IoError("cannot write " + path.string());
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

SceneScore score_graph(const SummaryGraph& predicted, const SummaryGraph& truth) {
    auto sorted = [](std::vector<std::string> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    if (sorted(predicted.nodes()) != sorted(truth.nodes())) {
        throw InvalidArgument("score_graph: predicted and truth graphs have different node sets");
    }
    const auto p = predicted.without_self_loops();
    const auto t = truth.without_self_loops();
    SceneScore s;
    for (const auto& e : p.edges()) {
        if (t.edges().count(e)) ++s.tp;
        else ++s.fp;
    }
    s.fn = static_cast<int>(t.size()) - s.tp;
    s.precision = s.tp + s.fp > 0 ? static_cast<double>(s.tp) / (s.tp + s.fp) : 0.0;
    s.recall = s.tp + s.fn > 0 ? static_cast<double>(s.tp) / (s.tp + s.fn) : 0.0;
    s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    return s;
}

void aggregate(SweepCell& cell) {
    std::sort(cell.scores.begin(), cell.scores.end(),
              [](const SceneScore& a, const SceneScore& b) { return a.scene_id < b.scene_id; });
    const auto n = static_cast<double>(cell.scores.size());
    cell.mean_f1 = cell.std_f1 = cell.mean_precision = cell.mean_recall = 0.0;
    cell.mean_runtime_s.reset();
    cell.n_errors = 0;
    if (cell.scores.empty()) return;
    double rt = 0.0;
    bool have_rt = true;
    for (const auto& s : cell.scores) {
        cell.mean_f1 += s.f1;
        cell.mean_precision += s.precision;
        cell.mean_recall += s.recall;
        cell.n_errors += s.error ? 1 : 0;
        if (s.runtime_s) rt += *s.runtime_s;
        else have_rt = false;
    }
    cell.mean_f1 /= n;
    cell.mean_precision /= n;
    cell.mean_recall /= n;
    double ss = 0.0;
    for (const auto& s : cell.scores) ss += (s.f1 - cell.mean_f1) * (s.f1 - cell.mean_f1);
    cell.std_f1 = std::sqrt(ss / n);
    if (have_rt) cell.mean_runtime_s = rt / n;
}

SweepCell evaluate_method(discovery::MethodId method, const std::vector<TimeSeriesScene>& scenes,
                          const SummaryGraph& truth, const discovery::MethodConfig& config,
                          const EvaluateOptions& options) {
    if (scenes.empty()) throw InvalidArgument("evaluate_method: no scenes");
    config.validate();
    std::vector<std::size_t> order(scenes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scenes[a].scene_id() < scenes[b].scene_id(); });

    SweepCell cell;
    cell.method = std::string(discovery::to_string(method));
    cell.variant = scenes[order[0]].variant();
    cell.alpha = config.alpha;
    cell.max_lag = config.max_lag;
    cell.max_lag_s = config.max_lag / scenes[order[0]].sample_rate_hz();
    cell.scores.resize(scenes.size());
    parallel_for(order.size(), options.jobs, [&](std::size_t k) {
        cell.scores[k] = run_one(method, scenes[order[k]], truth, config, options.seed + k, options.record_runtime);
    });
    aggregate(cell);
    return cell;
}

std::vector<Edge> parse_edge_list(const std::string& text) {
    std::vector<Edge> edges;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto arrow = line.find("->");
        if (arrow == std::string::npos) throw ParseError("edge list: expected 'src -> dst'", lineno);
        auto src = trim(line.substr(0, arrow));
        auto dst = trim(line.substr(arrow + 2));
        if (src.empty() || dst.empty()) throw ParseError("edge list: empty endpoint", lineno);
        edges.emplace_back(std::move(src), std::move(dst));
    }
    return edges;
}

std::string format_edge_list(const SummaryGraph& graph) {
    std::string out;
    for (const auto& [s, t] : graph.edges()) out += s + " -> " + t + "\n";
    return out;
}

Dataset load_dataset(const std::filesystem::path& dir, double rate) {
    if (!std::filesystem::is_directory(dir)) throw IoError("scene directory not found: " + dir.string());
    Dataset ds;
    auto name = dir.filename().string();
    if (name.empty()) name = dir.parent_path().filename().string();
    ds.name = name;
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".csv" && e.path().filename() != "manifest.csv") {
            files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no scene CSV files in " + dir.string());
    for (const auto& f : files) ds.scenes.push_back(load_scene_csv(f, rate));
    std::stable_sort(ds.scenes.begin(), ds.scenes.end(),
                     [](const TimeSeriesScene& a, const TimeSeriesScene& b) { return a.scene_id() < b.scene_id(); });
    return ds;
}

SummaryGraph dataset_truth(const std::filesystem::path& dir, const std::vector<std::string>& names,
                           Variant variant) {
    const auto truth_file = dir / "truth.txt";
    if (std::filesystem::exists(truth_file)) {
        std::ifstream f(truth_file, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        SummaryGraph g(names);
        for (const auto& [s, t] : parse_edge_list(ss.str())) g.add_edge(s, t);
        return g;
    }
    if (names == synth::convoy_variable_names(variant)) return synth::convoy_ground_truth(variant);
    throw InvalidArgument("no truth.txt in " + dir.string() + " and variables are not the convoy set");
}

std::vector<std::pair<double, double>> sweep_grid(const SweepSpec& spec) {
    std::vector<std::pair<double, double>> grid;
    if (spec.paper_grid) {
        for (double a : spec.alphas) grid.emplace_back(a, spec.fixed_max_lag_s);
        for (double l : spec.max_lags_s) grid.emplace_back(spec.fixed_alpha, l);
    } else {
        for (double a : spec.alphas) {
            for (double l : spec.max_lags_s) grid.emplace_back(a, l);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

std::vector<SweepCell> run_sweep(const SweepSpec& spec) {
    if (spec.methods.empty()) throw InvalidArgument("sweep: empty method list");
    if (spec.scene_dirs.empty()) throw InvalidArgument("sweep: no scene directories");
    if (spec.variants.empty()) throw InvalidArgument("sweep: no variants");
    std::vector<discovery::MethodId> methods;
    for (const auto& m : spec.methods) methods.push_back(discovery::parse_method(m));
    const auto grid = sweep_grid(spec);
    if (grid.empty()) throw InvalidArgument("sweep: empty alpha or max-lag list");

    struct Group {
        std::string dataset;
        Variant variant;
        std::vector<TimeSeriesScene> scenes;
        SummaryGraph truth;
    };
    std::vector<Group> groups;
    for (const auto& dir : spec.scene_dirs) {
        auto ds = load_dataset(dir, spec.sample_rate_hz);
        for (auto v : spec.variants) {
            Group g{ds.name, v, {}, {}};
            for (const auto& s : ds.scenes) {
                if (s.variant() == v) g.scenes.push_back(s);
            }
            if (g.scenes.empty()) continue;
            const auto& names = g.scenes.front().variable_names();
            for (const auto& s : g.scenes) {
                if (s.variable_names() != names) {
                    throw InvalidArgument("scene " + s.scene_id() + " in " + dir.string() +
                                          " has different variables from " + g.scenes.front().scene_id());
                }
            }
            g.truth = dataset_truth(dir, names, v);
            groups.push_back(std::move(g));
        }
    }
    if (groups.empty()) throw InvalidArgument("sweep: no scenes of the requested variants");

    std::vector<SweepCell> cells;
    std::vector<const Group*> cell_group;
    for (std::size_t m = 0; m < methods.size(); ++m) {
        for (const auto& g : groups) {
            for (const auto& [alpha, lag_s] : grid) {
                SweepCell c;
                c.method = std::string(discovery::to_string(methods[m]));
                c.dataset = g.dataset;
                c.variant = g.variant;
                c.alpha = alpha;
                c.max_lag_s = lag_s;
                c.max_lag = lag_samples(lag_s, spec.sample_rate_hz);
                c.scores.resize(g.scenes.size());
                cells.push_back(std::move(c));
                cell_group.push_back(&g);
            }
        }
    }

    std::vector<std::pair<std::size_t, std::size_t>> tasks;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (std::size_t s = 0; s < cell_group[c]->scenes.size(); ++s) tasks.emplace_back(c, s);
    }
    parallel_for(tasks.size(), spec.jobs, [&](std::size_t k) {
        const auto [c, s] = tasks[k];
        auto& cell = cells[c];
        const auto& g = *cell_group[c];
        discovery::MethodConfig cfg;
        cfg.alpha = cell.alpha;
        cfg.max_lag = cell.max_lag;
        cell.scores[s] = run_one(discovery::parse_method(cell.method), g.scenes[s], g.truth, cfg, spec.base_seed + s,
                                 spec.record_runtime);
    });
    for (auto& c : cells) aggregate(c);
    return cells;
}

std::string summary_csv(const std::vector<SweepCell>& cells) {
    std::ostringstream o;
    o << "method,dataset,variant,alpha,max_lag,n_scenes,mean_f1,std_f1,mean_precision,mean_recall,mean_runtime_s\n";
    for (const auto& c : cells) {
        o << c.method << ',' << c.dataset << ',' << to_string(c.variant) << ',' << num(c.alpha) << ',' << c.max_lag
          << ',' << c.scores.size() << ',' << num(c.mean_f1) << ',' << num(c.std_f1) << ',' << num(c.mean_precision)
          << ',' << num(c.mean_recall) << ',' << opt_num(c.mean_runtime_s) << '\n';
    }
    return o.str();
}

std::string detail_csv(const std::vector<SweepCell>& cells) {
    std::ostringstream o;
    o << "method,dataset,variant,alpha,max_lag,scene_id,tp,fp,fn,precision,recall,f1,runtime_s,error_flag\n";
    for (const auto& c : cells) {
        for (const auto& s : c.scores) {
            o << c.method << ',' << c.dataset << ',' << to_string(c.variant) << ',' << num(c.alpha) << ','
              << c.max_lag << ',' << s.scene_id << ',' << s.tp << ',' << s.fp << ',' << s.fn << ','
              << num(s.precision) << ',' << num(s.recall) << ',' << num(s.f1) << ',' << opt_num(s.runtime_s) << ','
              << (s.error ? 1 : 0) << '\n';
        }
    }
    return o.str();
}

namespace {

nlohmann::json score_json(const SceneScore& s) {
    nlohmann::json j{{"scene_id", s.scene_id}, {"tp", s.tp}, {"fp", s.fp}, {"fn", s.fn},
                     {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
                     {"runtime_s", s.runtime_s ? nlohmann::json(*s.runtime_s) : nlohmann::json(nullptr)},
                     {"error_flag", s.error}, {"abstained", s.abstained}};
    if (s.error) j["error"] = s.error_message;
    return j;
}

// Keys in first-seen order.
template <typename K>
void remember(std::vector<K>& seen, const K& k) {
    if (std::find(seen.begin(), seen.end(), k) == seen.end()) seen.push_back(k);
}

struct Curves {
    std::string best, vs_alpha, vs_lag;
};

// Best cell per (method, dataset, variant), and F1 curves where each
// (dataset, variant) contributes its best value over the other parameter.
Curves plot_data(const std::vector<SweepCell>& cells) {
    using Group = std::tuple<std::string, std::string, std::string>;
    std::vector<std::string> methods;
    std::vector<Group> groups;
    std::map<Group, const SweepCell*> best;
    std::map<std::tuple<std::string, std::string, std::string, double>, double> by_alpha, by_lag;
    std::map<std::string, std::vector<double>> alphas, lags;
    for (const auto& c : cells) {
        const std::string v(to_string(c.variant));
        const Group g{c.method, c.dataset, v};
        remember(methods, c.method);
        remember(groups, g);
        auto& b = best[g];
        if (!b || c.mean_f1 > b->mean_f1) b = &c;
        auto& a = by_alpha.try_emplace({c.method, c.dataset, v, c.alpha}, c.mean_f1).first->second;
        a = std::max(a, c.mean_f1);
        auto& l = by_lag.try_emplace({c.method, c.dataset, v, static_cast<double>(c.max_lag)}, c.mean_f1).first->second;
        l = std::max(l, c.mean_f1);
        remember(alphas[c.method], c.alpha);
        remember(lags[c.method], static_cast<double>(c.max_lag));
    }
    Curves out;
    std::ostringstream b, a, l;
    b << "method,dataset,variant,best_mean_f1,alpha,max_lag\n";
    for (const auto& g : groups) {
        const auto* c = best[g];
        b << std::get<0>(g) << ',' << std::get<1>(g) << ',' << std::get<2>(g) << ',' << num(c->mean_f1) << ','
          << num(c->alpha) << ',' << c->max_lag << '\n';
    }
    auto curve = [&](std::ostringstream& o, const char* col, std::map<std::string, std::vector<double>>& xs,
                     const decltype(by_alpha)& vals, bool integer) {
        o << "method," << col << ",mean_f1,n_groups\n";
        for (const auto& m : methods) {
            auto grid = xs[m];
            std::sort(grid.begin(), grid.end());
            for (double x : grid) {
                double sum = 0.0;
                int n = 0;
                for (const auto& g : groups) {
                    if (std::get<0>(g) != m) continue;
                    auto it = vals.find({m, std::get<1>(g), std::get<2>(g), x});
                    if (it == vals.end()) continue;
                    sum += it->second;
                    ++n;
                }
                o << m << ',' << (integer ? std::to_string(static_cast<long long>(x)) : num(x)) << ','
                  << num(sum / n) << ',' << n << '\n';
            }
        }
    };
    curve(a, "alpha", alphas, by_alpha, false);
    curve(l, "max_lag", lags, by_lag, true);
    out.best = b.str();
    out.vs_alpha = a.str();
    out.vs_lag = l.str();
    return out;
}

}  // namespace

void emit_report(const std::vector<SweepCell>& cells, ReportFormat format, const std::filesystem::path& dir,
                 const std::string& fp, const std::string& canonical_config) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    if (format != ReportFormat::Json) {
        write_file(dir / "summary.csv", summary_csv(cells));
        write_file(dir / "detail.csv", detail_csv(cells));
        const auto plots = plot_data(cells);
        write_file(dir / "plot_best_by_dataset.csv", plots.best);
        write_file(dir / "plot_f1_vs_alpha.csv", plots.vs_alpha);
        write_file(dir / "plot_f1_vs_lag.csv", plots.vs_lag);
    }
    if (format != ReportFormat::Csv) {
        nlohmann::json j;
        j["fingerprint"] = fp;
        j["config"] = canonical_config;
        j["cells"] = nlohmann::json::array();
        for (const auto& c : cells) {
            nlohmann::json jc{{"method", c.method}, {"dataset", c.dataset}, {"variant", to_string(c.variant)},
                              {"alpha", c.alpha}, {"max_lag", c.max_lag}, {"max_lag_s", c.max_lag_s},
                              {"n_scenes", c.scores.size()}, {"mean_f1", c.mean_f1}, {"std_f1", c.std_f1},
                              {"mean_precision", c.mean_precision}, {"mean_recall", c.mean_recall},
                              {"mean_runtime_s", c.mean_runtime_s ? nlohmann::json(*c.mean_runtime_s)
                                                                  : nlohmann::json(nullptr)},
                              {"n_errors", c.n_errors}};
            jc["scores"] = nlohmann::json::array();
            for (const auto& s : c.scores) jc["scores"].push_back(score_json(s));
            j["cells"].push_back(std::move(jc));
        }
        write_file(dir / "report.json", j.dump(2) + "\n");
    }
    if (!fp.empty()) write_file(dir / "fingerprint.txt", fp + "\n" + canonical_config);
}

std::string fingerprint(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream o;
    o << std::hex << std::setw(16) << std::setfill('0') << h;
    return o.str();
}

}  // namespace tcd::eval
