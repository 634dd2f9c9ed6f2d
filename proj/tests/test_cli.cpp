// End-to-end checks of the command-line tool: spawns the built binary and
// inspects files and exit codes. Usage: cli_tests <path-to-binary>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAIL: " << what << "\n";
    }
}

int run(const std::string& cmd) {
    const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
    if (rc == -1) return -1;
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

long line_count(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    long n = 0;
    while (std::getline(in, line)) ++n;
    return n;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_tests <binary>\n";
        return 1;
    }
    const std::string bin = argv[1];
    const fs::path dir = fs::temp_directory_path() / "trackswept_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string d = dir.string();

    // gen: file layout and the exact dropout-free row count
    check(run(bin + " gen --frames 5 --targets 4 --clutter 200 --jitter 0.5 --seed 7 --out " +
              d + "/scene") == 0,
          "gen exits 0");
    check(fs::exists(dir / "scene/points.csv"), "gen writes points.csv");
    check(fs::exists(dir / "scene/gt.json"), "gen writes gt.json");
    check(fs::exists(dir / "scene/manifest.json"), "gen writes manifest.json");
    check(line_count(dir / "scene/points.csv") == 1 + 4 * 5 + 200 * 5,
          "points.csv has header + 1020 rows");

    // determinism: same seed, byte-identical outputs
    check(run(bin + " gen --frames 5 --targets 4 --clutter 200 --jitter 0.5 --seed 7 --out " +
              d + "/scene2") == 0,
          "second gen exits 0");
    check(slurp(dir / "scene/points.csv") == slurp(dir / "scene2/points.csv"),
          "gen points deterministic");
    check(slurp(dir / "scene/gt.json") == slurp(dir / "scene2/gt.json"), "gen gt deterministic");

    // no targets: empty gt
    check(run(bin + " gen --frames 3 --targets 0 --clutter 5 --seed 1 --out " + d + "/empty") == 0,
          "gen with no targets");
    check(slurp(dir / "empty/gt.json").find("\"tracks\": []") != std::string::npos,
          "empty gt tracks array");

    // detect: ts and ps agree byte for byte; reruns are byte-identical
    const std::string pts = d + "/scene/points.csv";
    check(run(bin + " detect --input " + pts + " --eps1 2 --eps2 2 --method ts --out " + d +
              "/ts.json") == 0,
          "detect ts exits 0");
    check(run(bin + " detect --input " + pts + " --eps1 2 --eps2 2 --method ps --out " + d +
              "/ps.json") == 0,
          "detect ps exits 0");
    check(run(bin + " detect --input " + pts + " --eps1 2 --eps2 2 --method ts --out " + d +
              "/ts2.json") == 0,
          "detect rerun exits 0");
    check(slurp(dir / "ts.json") == slurp(dir / "ps.json"), "ts and ps outputs identical");
    check(slurp(dir / "ts.json") == slurp(dir / "ts2.json"), "detect deterministic");
    check(fs::exists(dir / "ts.json.manifest.json"), "detect writes a manifest");

    // the thread cap must not change results
    check(run("TRACKSWEPT_THREADS=4 " + bin + " detect --input " + pts +
              " --eps1 2 --eps2 2 --method ts --out " + d + "/ts4.json") == 0,
          "detect with thread cap exits 0");
    check(slurp(dir / "ts.json") == slurp(dir / "ts4.json"), "thread cap output identical");

    // selection: thresh:3 keeps only tracks longer than 3
    check(run(bin + " detect --input " + pts + " --eps1 2 --eps2 2 --select thresh:3 --out " + d +
              "/sel.json") == 0,
          "detect with threshold selection");
    {
        const std::string body = slurp(dir / "sel.json");
        std::size_t pos = 0;
        while ((pos = body.find("\"point_ids\"", pos)) != std::string::npos) {
            const std::size_t open = body.find('[', pos);
            const std::size_t close = body.find(']', open);
            const std::string ids = body.substr(open, close - open);
            const long commas = std::count(ids.begin(), ids.end(), ',');
            check(commas + 1 >= 4, "thresh:3 keeps only length >= 4");
            pos = close;
        }
    }

    // eval: scoring ground truth against itself is perfect
    check(run(bin + " eval --pred " + d + "/scene/gt.json --gt " + d + "/scene/gt.json" +
              " --points " + pts + " --lambda 3 --out " + d + "/metrics.json") == 0,
          "eval exits 0");
    {
        const std::string body = slurp(dir / "metrics.json");
        check(body.find("\"recall\": 1.0") != std::string::npos, "eval self recall 1.0");
        check(body.find("\"fp\": 0") != std::string::npos, "eval self fp 0");
    }

    // exit codes: usage (2), data (3), guard (4)
    check(run(bin + " detect --input " + pts + " --eps1 -1 --out " + d + "/x.json") == 2,
          "negative eps1 exits 2");
    check(run(bin + " eval --pred " + d + "/scene/gt.json --gt " + d + "/scene/gt.json" +
              " --points " + pts + " --lambda 0") == 2,
          "lambda 0 exits 2");
    check(run(bin + " detect --input " + d + "/nonexistent.csv --out " + d + "/x.json") == 3,
          "missing input exits 3");
    check(run(bin + " gen --frames 5 --targets 0 --clutter 400 --seed 2 --out " + d + "/big") == 0,
          "gen big scene");
    check(run(bin + " detect --input " + d + "/big/points.csv --method naive --out " + d +
              "/naive.json") == 4,
          "naive guard exits 4");
    check(run(bin + " detect --flag-that-does-not-exist") == 2, "unknown flag exits 2");

    // bench: tiny run produces the csv schema
    check(run(bin + " bench --sizes 40,80 --methods ts --repeats 1 --seed 3 --out " + d +
              "/bench.csv") == 0,
          "bench exits 0");
    {
        const std::string body = slurp(dir / "bench.csv");
        check(body.rfind("method,n,median_seconds,slope_fit\n", 0) == 0, "bench csv header");
        check(body.find("ts,slope,,") != std::string::npos, "bench csv slope row");
    }

    if (failures == 0) std::cout << "cli_tests: all checks passed\n";
    fs::remove_all(dir);
    return failures == 0 ? 0 : 1;
}
