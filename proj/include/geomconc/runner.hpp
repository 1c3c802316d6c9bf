#ifndef GEOMCONC_RUNNER_HPP
#define GEOMCONC_RUNNER_HPP

// Subcommand dispatch: every experiment produces named result files (CSV
// with a parameter-echo comment block) plus a one-line summary.

#include <string>
#include <vector>

#include "geomconc/config.hpp"

namespace geomconc {

struct ResultFile {
    std::string name;
    std::string content;
};

struct RunResult {
    std::vector<ResultFile> files;
    std::string summary;
};

// Unknown subcommand names throw usage_error.
struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

const std::vector<std::string>& subcommands();

RunResult run_subcommand(const std::string& subcommand, const ExperimentConfig& cfg);

// Writes every result file into dir (created if missing).
void write_results(const RunResult& result, const std::string& dir);

} // namespace geomconc

#endif
