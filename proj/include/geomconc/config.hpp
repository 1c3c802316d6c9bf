#ifndef GEOMCONC_CONFIG_HPP
#define GEOMCONC_CONFIG_HPP

// Structured experiment configuration: a JSON document validated against
// the owning module's preconditions, with errors that name the offending
// path in the tree.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "geomconc/asymptotics.hpp"

namespace geomconc {

struct ExperimentConfig {
    nlohmann::json doc; // canonical (sorted-key) document
    std::uint64_t master_seed = 0;
    int threads = 0;

    std::string canonical_text() const { return doc.dump(); }
    std::uint64_t hash() const { return fnv1a64(canonical_text()); }
};

// Parses and structurally validates a config document. The master seed is
// mandatory: published numbers must be reproducible.
ExperimentConfig parse_config(const std::string& json_text);

// Typed extraction helpers; each throws validation_error naming the path.
IntensityModel config_model(const ExperimentConfig& cfg);
Window config_window(const ExperimentConfig& cfg);
Shape config_shape(const ExperimentConfig& cfg, int dim);
Selector config_selector(const ExperimentConfig& cfg);
RegimeSpec config_regime(const ExperimentConfig& cfg, int dim);
ExperimentOptions config_experiment_options(const ExperimentConfig& cfg);

// scalar lookups with json-path error messages
double config_number(const ExperimentConfig& cfg, const std::string& path);
double config_number_or(const ExperimentConfig& cfg, const std::string& path, double dflt);
std::int64_t config_int_or(const ExperimentConfig& cfg, const std::string& path,
                           std::int64_t dflt);
std::string config_string_or(const ExperimentConfig& cfg, const std::string& path,
                             const std::string& dflt);
bool config_has(const ExperimentConfig& cfg, const std::string& path);

} // namespace geomconc

#endif
