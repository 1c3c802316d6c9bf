// End-to-end checks of the installed command line: exit codes, output
// files, thread-count invariance. The binary path arrives as argv[1].
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAIL: " << what << "\n";
    }
}

int run(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return rc < 0 ? rc : WEXITSTATUS(rc);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_tests <path-to-geomconc>\n";
        return 2;
    }
    const std::string bin = argv[1];
    const std::string dir = "cli_test_work";
    expect(run("rm -rf " + dir + " && mkdir -p " + dir) == 0, "workdir setup");

    // usage errors: no args, unknown subcommand, missing config
    expect(run(bin + " >/dev/null 2>&1") == 1, "no arguments exits 1");
    expect(run(bin + " bogus --config x.json >/dev/null 2>&1") == 1,
           "unknown subcommand exits 1");
    expect(run(bin + " sample >/dev/null 2>&1") == 1, "missing --config exits 1");
    expect(run(bin + " --help >/dev/null 2>&1") == 0, "--help exits 0");

    // validation error: config without a seed
    write_file(dir + "/noseed.json", R"({"model": {"type": "homogeneous", "rate": 1}})");
    expect(run(bin + " sample --config " + dir + "/noseed.json >/dev/null 2>&1") == 2,
           "config without seed exits 2");

    // zero-rate sample: empty point file, exit 0
    write_file(dir + "/zero.json", R"JSON({
      "seed": 4,
      "model": {"type": "homogeneous", "rate": 0.0},
      "window": {"kind": "box", "dimension": 2, "half_extent": 3.0}
    })JSON");
    expect(run(bin + " sample --config " + dir + "/zero.json --out " + dir +
               "/zero >/dev/null") == 0,
           "zero-rate sample exits 0");
    const std::string pts = slurp(dir + "/zero/points.csv");
    expect(!pts.empty(), "points.csv written");
    expect(pts.find("x,y") != std::string::npos, "points.csv has a header row");
    expect(pts.rfind("# geomconc", 0) == 0, "points.csv starts with the echo block");

    // lemma-check: summary printed, violations zero
    write_file(dir + "/lemma.json", R"({"seed": 1, "lemma_points": 50000})");
    expect(run(bin + " lemma-check --config " + dir + "/lemma.json --out " + dir +
               "/lemma > " + dir + "/lemma_stdout.txt") == 0,
           "lemma-check exits 0");
    expect(slurp(dir + "/lemma_stdout.txt").find("violations: 0") != std::string::npos,
           "lemma-check prints violations: 0");

    // tails with thread-count override: bit-identical CSV bodies
    write_file(dir + "/tails.json", R"JSON({
      "seed": 21,
      "model": {"type": "homogeneous", "rate": 1.0},
      "window": {"kind": "torus", "dimension": 2, "half_extent": 5.0},
      "shape": {"norm": "euclidean", "rho": 0.5},
      "selector": {"kind": "exactly_k", "k": 1},
      "replications": 1000,
      "r_grid": [0.0, 3.0]
    })JSON");
    expect(run(bin + " tails --config " + dir + "/tails.json --threads 1 --out " + dir +
               "/t1 >/dev/null") == 0,
           "tails --threads 1 exits 0");
    expect(run(bin + " tails --config " + dir + "/tails.json --threads 4 --out " + dir +
               "/t4 >/dev/null") == 0,
           "tails --threads 4 exits 0");
    const std::string a = slurp(dir + "/t1/tails.csv");
    const std::string b = slurp(dir + "/t4/tails.csv");
    const std::string data_a = a.substr(a.find("\nr,"));
    const std::string data_b = b.substr(b.find("\nr,"));
    expect(data_a == data_b, "tails data identical across thread counts");

    // seed override changes results
    expect(run(bin + " tails --config " + dir + "/tails.json --seed 999 --out " + dir +
               "/t9 >/dev/null") == 0,
           "tails --seed exits 0");
    expect(slurp(dir + "/t9/tails.csv").find("# master_seed: 999") != std::string::npos,
           "seed override lands in the echo block");

    // thread count from the environment
    expect(run("GEOMCONC_THREADS=4 " + bin + " tails --config " + dir +
               "/tails.json --out " + dir + "/tenv >/dev/null") == 0,
           "GEOMCONC_THREADS run exits 0");
    const std::string env_csv = slurp(dir + "/tenv/tails.csv");
    expect(env_csv.substr(env_csv.find("\nr,")) == data_a,
           "GEOMCONC_THREADS run matches --threads 1 data");

    // runtime failure: unwritable output directory exits 3
    expect(run(bin + " sample --config " + dir + "/zero.json --out /proc/geomconc_nope"
               " >/dev/null 2>&1") == 3,
           "unwritable output dir exits 3");

    // inhomogeneous disk-graph setup: bound columns dominate empirical columns
    write_file(dir + "/fig.json", R"JSON({
      "seed": 7,
      "model": {"type": "radial_power", "alpha": 100.0, "gamma": 2.0},
      "window": {"kind": "box", "dimension": 2, "half_extent": 30.0},
      "shape": {"norm": "euclidean", "rho": 0.95},
      "selector": {"kind": "exactly_k", "k": 3},
      "replications": 1000
    })JSON");
    expect(run(bin + " tails --config " + dir + "/fig.json --out " + dir +
               "/fig >/dev/null") == 0,
           "inhomogeneous tails exits 0");
    {
        std::istringstream in(slurp(dir + "/fig/tails.csv"));
        std::string line;
        bool saw_data = false, dominated = true;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line[0] == 'r') continue;
            saw_data = true;
            double col[9];
            std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &col[0],
                        &col[1], &col[2], &col[3], &col[4], &col[5], &col[6], &col[7],
                        &col[8]);
            const double up_hw = 0.5 * (col[4] - col[3]);
            const double lo_hw = 0.5 * (col[8] - col[7]);
            if (col[1] < col[2] - up_hw) dominated = false; // upper bound vs upper emp
            if (col[5] < col[6] - lo_hw) dominated = false; // lower bound vs lower emp
        }
        expect(saw_data, "inhomogeneous tails CSV has data rows");
        expect(dominated, "bounds dominate empirical frequencies");
    }

    if (failures == 0) std::puts("cli_tests: all checks passed");
    return failures == 0 ? 0 : 1;
}
