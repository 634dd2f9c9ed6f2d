#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "trackswept/detect.hpp"
#include "trackswept/io.hpp"
#include "trackswept/metrics.hpp"
#include "trackswept/scene.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace trackswept;

namespace {

constexpr const char* kVersion = "0.1.0";

// exit code contract: 0 ok, 2 usage, 3 data, 4 guard refusal
constexpr int kUsageError = 2;
constexpr int kDataError = 3;
constexpr int kGuardError = 4;

std::string fnv1a_hex(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct ManifestWriter {
    json doc;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    ManifestWriter(const std::string& command, const json& args) {
        doc["command"] = command;
        doc["tool_version"] = kVersion;
        doc["args"] = args;
        doc["input_hashes"] = json::object();
        doc["outputs"] = json::array();
    }
    void hash_input(const fs::path& path) {
        doc["input_hashes"][path.string()] = fnv1a_hex(read_text_file(path));
    }
    void add_output(const fs::path& path) { doc["outputs"].push_back(path.string()); }
    void write(const fs::path& path) {
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        doc["wall_time_seconds"] = dt.count();
        write_text_file(path, doc.dump(2) + "\n");
    }
};

int thread_cap_from_env() {
    const char* env = std::getenv("TRACKSWEPT_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    if (v <= 0) return 1;  // 0 means sequential
    return std::min(v, 64);
}

json metrics_to_json(const MetricsReport& r) {
    auto level = [](const LevelMetrics& m) {
        return json{{"tp", m.counts.tp},        {"fn", m.counts.fn_},
                    {"fp", m.counts.fp},        {"recall", m.recall},
                    {"precision", m.precision}, {"f1", m.f1},
                    {"zero_gt", m.zero_gt},     {"zero_pred", m.zero_pred}};
    };
    return json{{"lambda", r.lambda},
                {"runtime_seconds", r.runtime_seconds},
                {"track_level", level(r.track_level)},
                {"point_level", level(r.point_level)}};
}

Selection parse_selection(const std::string& spec) {
    Selection sel;
    if (spec == "all") {
        sel.kind = Selection::Kind::All;
        return sel;
    }
    const auto colon = spec.find(':');
    if (colon == std::string::npos || colon + 1 >= spec.size())
        throw CLI::ValidationError("--select", "expected topk:K, thresh:Tr or all");
    const std::string head = spec.substr(0, colon);
    const int value = std::atoi(spec.c_str() + colon + 1);
    if (head == "topk" && value >= 1) {
        sel.kind = Selection::Kind::TopK;
        sel.k = value;
        return sel;
    }
    if (head == "thresh" && value >= 3) {
        sel.kind = Selection::Kind::Threshold;
        sel.tr = value;
        return sel;
    }
    throw CLI::ValidationError("--select", "expected topk:K (K>=1), thresh:Tr (Tr>=3) or all");
}

int cmd_gen(const SceneConfig& cfg, const fs::path& out_dir) {
    GeneratedScene scene = generate_scene(cfg);
    fs::create_directories(out_dir);
    ManifestWriter manifest("gen", json{{"frames", cfg.frames},
                                        {"width", cfg.width},
                                        {"height", cfg.height},
                                        {"targets", cfg.targets},
                                        {"clutter", cfg.clutter_per_frame},
                                        {"jitter", cfg.jitter_sigma},
                                        {"speed_min", cfg.speed_min},
                                        {"speed_max", cfg.speed_max},
                                        {"dropout", cfg.dropout_prob},
                                        {"seed", cfg.seed},
                                        {"streak", cfg.streak_clutter},
                                        {"out", out_dir.string()}});
    write_scene(out_dir, scene);
    manifest.add_output((out_dir / "points.csv").string());
    manifest.add_output((out_dir / "gt.json").string());
    manifest.write(out_dir / "manifest.json");
    std::printf("wrote %zu points and %zu ground-truth tracks to %s\n", scene.points.size(),
                scene.gt.tracks.size(), out_dir.string().c_str());
    return 0;
}

struct DetectArgs {
    std::string input;
    std::string out = "tracks.json";
    DetectorConfig cfg;
    std::string method = "ts";
    std::string select = "all";
    bool no_vertical = false;
};

int cmd_detect(DetectArgs& a) {
    a.cfg.method = method_from_name(a.method);
    const Selection sel = parse_selection(a.select);
    a.cfg.ransac.inlier_eps = a.cfg.eps1;
    a.cfg.hough.inlier_eps = a.cfg.eps1;
    a.cfg.threads = thread_cap_from_env();

    ManifestWriter manifest("detect", json{{"input", a.input},
                                           {"eps1", a.cfg.eps1},
                                           {"eps2", a.cfg.eps2},
                                           {"min_len", a.cfg.min_frames},
                                           {"method", a.method},
                                           {"select", a.select},
                                           {"vertical", !a.no_vertical},
                                           {"ransac_iterations", a.cfg.ransac.iterations},
                                           {"ransac_seed", a.cfg.ransac.seed},
                                           {"hough_rho_bins", a.cfg.hough.rho_bins},
                                           {"hough_theta_bins", a.cfg.hough.theta_bins},
                                           {"hough_peaks", a.cfg.hough.peak_count},
                                           {"out", a.out}});
    manifest.hash_input(a.input);

    PointSet ps = read_points_csv(a.input);
    TrackSet tracks =
        a.no_vertical ? find_all_tracks(ps, a.cfg) : find_all_tracks_with_vertical(ps, a.cfg);
    TrackSet selected = select_tracks(tracks, sel);

    write_tracks_json(a.out, selected);
    manifest.add_output(a.out);
    manifest.write(a.out + ".manifest.json");
    std::printf("found %zu tracks (%zu after selection)\n", tracks.tracks.size(),
                selected.tracks.size());
    return 0;
}

struct EvalArgs {
    std::string pred, gt, points, out;
    double lambda = 3.0;
};

int cmd_eval(const EvalArgs& a) {
    ManifestWriter manifest("eval", json{{"pred", a.pred},
                                         {"gt", a.gt},
                                         {"points", a.points},
                                         {"lambda", a.lambda},
                                         {"out", a.out}});
    manifest.hash_input(a.pred);
    manifest.hash_input(a.gt);
    manifest.hash_input(a.points);

    PointSet ps = read_points_csv(a.points);
    TrackSet pred = read_tracks_json(a.pred, ps.size());
    TrackSet gt = read_tracks_json(a.gt, ps.size());

    const auto start = std::chrono::steady_clock::now();
    MetricsReport report = score(gt, pred, ps, MatchConfig{a.lambda});
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    report.runtime_seconds = dt.count();

    const std::string text = metrics_to_json(report).dump(2) + "\n";
    if (a.out.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        write_text_file(a.out, text);
        manifest.add_output(a.out);
        manifest.write(a.out + ".manifest.json");
    }
    return 0;
}

struct BenchArgs {
    std::string sizes = "200,400,800,1600";
    std::string methods = "ts,ps,ransac";
    int repeats = 5;
    unsigned seed = 1;
    double timeout = 300.0;
    BenchSceneTemplate tmpl;
    std::string out = "bench.csv";
};

int cmd_bench(const BenchArgs& a) {
    std::vector<int> sizes;
    for (std::size_t pos = 0; pos < a.sizes.size();) {
        const auto comma = a.sizes.find(',', pos);
        sizes.push_back(std::atoi(a.sizes.substr(pos, comma - pos).c_str()));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    std::vector<Method> methods;
    for (std::size_t pos = 0; pos < a.methods.size();) {
        const auto comma = a.methods.find(',', pos);
        methods.push_back(method_from_name(a.methods.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }

    ManifestWriter manifest("bench", json{{"sizes", a.sizes},
                                          {"methods", a.methods},
                                          {"repeats", a.repeats},
                                          {"seed", a.seed},
                                          {"timeout", a.timeout},
                                          {"out", a.out}});
    BenchTable table = bench_scaling(sizes, a.tmpl, methods, a.repeats, a.seed, a.timeout);
    write_text_file(a.out, bench_table_csv(table));
    manifest.add_output(a.out);
    manifest.write(a.out + ".manifest.json");
    for (const auto& [method, slope] : table.slopes)
        std::printf("%s: log-log slope %.3f\n", method.c_str(), slope);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trackswept: detection of linear point tracks via dual-space sweeps"};
    app.require_subcommand(1);

    SceneConfig gen_cfg;
    std::string gen_out = "scene";
    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic scene");
    gen->add_option("--frames", gen_cfg.frames, "number of frames")->check(CLI::PositiveNumber);
    gen->add_option("--targets", gen_cfg.targets, "number of targets")
        ->check(CLI::NonNegativeNumber);
    gen->add_option("--clutter", gen_cfg.clutter_per_frame, "clutter points per frame")
        ->check(CLI::NonNegativeNumber);
    gen->add_option("--jitter", gen_cfg.jitter_sigma, "detection noise sigma, px")
        ->check(CLI::NonNegativeNumber);
    gen->add_option("--dropout", gen_cfg.dropout_prob, "missed-detection probability");
    gen->add_option("--width", gen_cfg.width, "image width, px")->check(CLI::PositiveNumber);
    gen->add_option("--height", gen_cfg.height, "image height, px")->check(CLI::PositiveNumber);
    gen->add_option("--speed-min", gen_cfg.speed_min, "min target speed, px/frame");
    gen->add_option("--speed-max", gen_cfg.speed_max, "max target speed, px/frame");
    gen->add_option("--seed", gen_cfg.seed, "rng seed");
    gen->add_flag("--streak", gen_cfg.streak_clutter, "clutter along short segments");
    gen->add_option("--out", gen_out, "output directory");

    DetectArgs det;
    CLI::App* detect = app.add_subcommand("detect", "find all feasible tracks");
    detect->add_option("--input", det.input, "points csv")->required();
    detect->add_option("--eps1", det.cfg.eps1, "spatial tolerance, px")
        ->check(CLI::PositiveNumber);
    detect->add_option("--eps2", det.cfg.eps2, "time-linearity tolerance, px")
        ->check(CLI::PositiveNumber);
    detect->add_option("--min-len", det.cfg.min_frames, "minimum distinct frames per track")
        ->check(CLI::Range(3, 1000000));
    detect->add_option("--method", det.method, "ts|ps|ransac|hough|naive")
        ->check(CLI::IsMember({"ts", "ps", "ransac", "hough", "naive"}));
    detect->add_option("--select", det.select, "topk:K | thresh:Tr | all");
    detect->add_flag("--no-vertical", det.no_vertical, "skip the axis-swapped second pass");
    detect->add_option("--ransac-iters", det.cfg.ransac.iterations, "ransac iterations per round")
        ->check(CLI::PositiveNumber);
    detect->add_option("--ransac-seed", det.cfg.ransac.seed, "ransac seed");
    detect->add_option("--hough-rho-bins", det.cfg.hough.rho_bins, "hough rho bins");
    detect->add_option("--hough-theta-bins", det.cfg.hough.theta_bins, "hough theta bins");
    detect->add_option("--hough-peaks", det.cfg.hough.peak_count, "hough peak count");
    detect->add_option("--out", det.out, "output tracks json");

    EvalArgs ev;
    CLI::App* eval = app.add_subcommand("eval", "score predicted tracks against ground truth");
    eval->add_option("--pred", ev.pred, "predicted tracks json")->required();
    eval->add_option("--gt", ev.gt, "ground-truth tracks json")->required();
    eval->add_option("--points", ev.points, "points csv")->required();
    eval->add_option("--lambda", ev.lambda, "match radius, px")->check(CLI::PositiveNumber);
    eval->add_option("--out", ev.out, "metrics json (stdout when omitted)");

    BenchArgs bench;
    CLI::App* bn = app.add_subcommand("bench", "runtime scaling benchmark");
    bn->add_option("--sizes", bench.sizes, "comma-separated point counts, ascending");
    bn->add_option("--methods", bench.methods, "comma-separated methods");
    bn->add_option("--repeats", bench.repeats, "repeats per cell")->check(CLI::PositiveNumber);
    bn->add_option("--seed", bench.seed, "rng seed");
    bn->add_option("--timeout", bench.timeout, "per-cell timeout, seconds");
    bn->add_option("--frames", bench.tmpl.frames, "frames per scene");
    bn->add_option("--targets", bench.tmpl.targets, "targets per scene");
    bn->add_option("--jitter", bench.tmpl.jitter_sigma, "jitter sigma");
    bn->add_option("--out", bench.out, "output csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        (void)app.exit(e);
        return kUsageError;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_cfg, gen_out);
        if (detect->parsed()) return cmd_detect(det);
        if (eval->parsed()) return cmd_eval(ev);
        if (bn->parsed()) return cmd_bench(bench);
    } catch (const TooLarge& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kGuardError;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kDataError;
    } catch (const SchemaError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kDataError;
    } catch (const InfeasibleConfig& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsageError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return 0;
}
