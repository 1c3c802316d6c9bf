/* geomconc C API: component-count experiments for random geometric graphs
 * over Poisson point processes.
 *
 * All entry points return gc_status; on failure gc_last_error() holds a
 * message (thread-local, valid until the next call on the same thread).
 * Handles are opaque and must be released with the matching _free call.
 */
#ifndef GEOMCONC_H
#define GEOMCONC_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gc_status {
    GC_OK = 0,
    GC_ERR_USAGE = 1,      /* unknown subcommand / malformed call */
    GC_ERR_VALIDATION = 2, /* config violates a module precondition */
    GC_ERR_RUNTIME = 3     /* failure while running the experiment */
} gc_status;

typedef struct gc_config gc_config;
typedef struct gc_result gc_result;

const char* gc_version(void);
/* space-separated list of subcommand names */
const char* gc_subcommands(void);
const char* gc_last_error(void);

/* Parse a JSON config from text or from a file. On success *out owns the
 * parsed config. */
gc_status gc_config_parse(const char* json_text, gc_config** out);
gc_status gc_config_load_file(const char* path, gc_config** out);
void gc_config_free(gc_config* cfg);

gc_status gc_config_override_seed(gc_config* cfg, uint64_t seed);
gc_status gc_config_override_threads(gc_config* cfg, int threads);

/* Run one subcommand; *out owns the result files. */
gc_status gc_run(const gc_config* cfg, const char* subcommand, gc_result** out);
void gc_result_free(gc_result* result);

int gc_result_file_count(const gc_result* result);
const char* gc_result_file_name(const gc_result* result, int index);
const char* gc_result_file_content(const gc_result* result, int index);
const char* gc_result_summary(const gc_result* result);
gc_status gc_result_write(const gc_result* result, const char* dir);

#ifdef __cplusplus
}
#endif

#endif /* GEOMCONC_H */
