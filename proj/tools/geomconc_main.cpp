// geomconc command line: thin client of the C API.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "geomconc.h"

namespace {

void print_usage(std::FILE* f) {
    std::fprintf(f,
                 "usage: geomconc <subcommand> --config <file> [--out <dir>] "
                 "[--seed <u64>] [--threads <n>]\n"
                 "subcommands: %s\n"
                 "exit codes: 0 success, 1 usage, 2 validation, 3 runtime\n",
                 gc_subcommands());
}

bool known_subcommand(const std::string& name) {
    const std::string all = gc_subcommands();
    std::size_t pos = 0;
    while (pos <= all.size()) {
        const std::size_t end = all.find(' ', pos);
        const std::string tok =
            all.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        if (tok == name) return true;
        if (end == std::string::npos) break;
        pos = end + 1;
    }
    return false;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        print_usage(stderr);
        return 1;
    }
    const std::string subcommand = argv[1];
    if (subcommand == "--help" || subcommand == "-h" || subcommand == "help") {
        print_usage(stdout);
        return 0;
    }
    if (!known_subcommand(subcommand)) {
        std::fprintf(stderr, "geomconc: unknown subcommand '%s'\n", subcommand.c_str());
        print_usage(stderr);
        return 1;
    }

    std::string config_path, out_dir = ".";
    bool have_seed = false, have_threads = false;
    uint64_t seed = 0;
    int threads = 0;
    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        auto next = [&](const char* what) -> const char* {
            if (i + 1 >= argc) {
                std::fprintf(stderr, "geomconc: %s needs a value\n", what);
                std::exit(1);
            }
            return argv[++i];
        };
        if (arg == "--config") {
            config_path = next("--config");
        } else if (arg == "--out") {
            out_dir = next("--out");
        } else if (arg == "--seed") {
            seed = std::strtoull(next("--seed"), nullptr, 10);
            have_seed = true;
        } else if (arg == "--threads") {
            threads = std::atoi(next("--threads"));
            have_threads = true;
        } else {
            std::fprintf(stderr, "geomconc: unknown option '%s'\n", arg.c_str());
            print_usage(stderr);
            return 1;
        }
    }
    if (config_path.empty()) {
        std::fprintf(stderr, "geomconc: --config is required\n");
        print_usage(stderr);
        return 1;
    }

    gc_config* cfg = nullptr;
    gc_status st = gc_config_load_file(config_path.c_str(), &cfg);
    if (st != GC_OK) {
        std::fprintf(stderr, "geomconc: %s\n", gc_last_error());
        return static_cast<int>(st);
    }
    if (have_seed) gc_config_override_seed(cfg, seed);
    if (have_threads) gc_config_override_threads(cfg, threads);

    gc_result* result = nullptr;
    st = gc_run(cfg, subcommand.c_str(), &result);
    if (st != GC_OK) {
        std::fprintf(stderr, "geomconc: %s\n", gc_last_error());
        gc_config_free(cfg);
        return static_cast<int>(st);
    }

    st = gc_result_write(result, out_dir.c_str());
    if (st != GC_OK) {
        std::fprintf(stderr, "geomconc: %s\n", gc_last_error());
        gc_result_free(result);
        gc_config_free(cfg);
        return static_cast<int>(st);
    }

    const int nfiles = gc_result_file_count(result);
    for (int i = 0; i < nfiles; ++i)
        std::printf("wrote %s/%s\n", out_dir.c_str(), gc_result_file_name(result, i));
    std::printf("%s\n", gc_result_summary(result));

    gc_result_free(result);
    gc_config_free(cfg);
    return 0;
}
