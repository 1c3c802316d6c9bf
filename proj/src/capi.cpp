#include "geomconc.h"

#include <fstream>
#include <sstream>
#include <string>

#include "geomconc/runner.hpp"

using geomconc::ExperimentConfig;
using geomconc::RunResult;

struct gc_config {
    ExperimentConfig cfg;
};

struct gc_result {
    RunResult result;
};

namespace {

thread_local std::string g_last_error;

gc_status fail(gc_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <class Fn>
gc_status guarded(Fn&& fn) {
    try {
        fn();
        return GC_OK;
    } catch (const geomconc::usage_error& e) {
        return fail(GC_ERR_USAGE, e.what());
    } catch (const geomconc::validation_error& e) {
        return fail(GC_ERR_VALIDATION, e.what());
    } catch (const std::exception& e) {
        return fail(GC_ERR_RUNTIME, e.what());
    }
}

} // namespace

extern "C" {

const char* gc_version(void) { return geomconc::kVersion; }

const char* gc_subcommands(void) {
    static const std::string joined = [] {
        std::string s;
        for (const auto& name : geomconc::subcommands()) {
            if (!s.empty()) s += ' ';
            s += name;
        }
        return s;
    }();
    return joined.c_str();
}

const char* gc_last_error(void) { return g_last_error.c_str(); }

gc_status gc_config_parse(const char* json_text, gc_config** out) {
    if (!json_text || !out) return fail(GC_ERR_USAGE, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto handle = new gc_config{geomconc::parse_config(json_text)};
        *out = handle;
    });
}

gc_status gc_config_load_file(const char* path, gc_config** out) {
    if (!path || !out) return fail(GC_ERR_USAGE, "null argument");
    *out = nullptr;
    std::ifstream in(path, std::ios::binary);
    if (!in) return fail(GC_ERR_USAGE, std::string("cannot open config file ") + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return gc_config_parse(buf.str().c_str(), out);
}

void gc_config_free(gc_config* cfg) { delete cfg; }

gc_status gc_config_override_seed(gc_config* cfg, uint64_t seed) {
    if (!cfg) return fail(GC_ERR_USAGE, "null config");
    cfg->cfg.master_seed = seed;
    cfg->cfg.doc["seed"] = seed;
    return GC_OK;
}

gc_status gc_config_override_threads(gc_config* cfg, int threads) {
    if (!cfg) return fail(GC_ERR_USAGE, "null config");
    if (threads < 0) return fail(GC_ERR_VALIDATION, "threads must be >= 0");
    cfg->cfg.threads = threads;
    cfg->cfg.doc["threads"] = threads;
    return GC_OK;
}

gc_status gc_run(const gc_config* cfg, const char* subcommand, gc_result** out) {
    if (!cfg || !subcommand || !out) return fail(GC_ERR_USAGE, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto handle = new gc_result{geomconc::run_subcommand(subcommand, cfg->cfg)};
        *out = handle;
    });
}

void gc_result_free(gc_result* result) { delete result; }

int gc_result_file_count(const gc_result* result) {
    return result ? static_cast<int>(result->result.files.size()) : 0;
}

const char* gc_result_file_name(const gc_result* result, int index) {
    if (!result || index < 0 ||
        index >= static_cast<int>(result->result.files.size()))
        return nullptr;
    return result->result.files[static_cast<std::size_t>(index)].name.c_str();
}

const char* gc_result_file_content(const gc_result* result, int index) {
    if (!result || index < 0 ||
        index >= static_cast<int>(result->result.files.size()))
        return nullptr;
    return result->result.files[static_cast<std::size_t>(index)].content.c_str();
}

const char* gc_result_summary(const gc_result* result) {
    return result ? result->result.summary.c_str() : "";
}

gc_status gc_result_write(const gc_result* result, const char* dir) {
    if (!result || !dir) return fail(GC_ERR_USAGE, "null argument");
    return guarded([&] { geomconc::write_results(result->result, dir); });
}

} // extern "C"
