#include "geomconc/config.hpp"

#include <cmath>
#include <sstream>

namespace geomconc {

namespace {

using nlohmann::json;

const json* walk(const json& doc, const std::string& path) {
    const json* cur = &doc;
    std::istringstream ss(path);
    std::string key;
    while (std::getline(ss, key, '.')) {
        if (!cur->is_object() || !cur->contains(key)) return nullptr;
        cur = &(*cur)[key];
    }
    return cur;
}

const json& need(const json& doc, const std::string& path) {
    const json* p = walk(doc, path);
    if (!p) throw validation_error("config: missing field '" + path + "'");
    return *p;
}

double need_number(const json& doc, const std::string& path) {
    const json& v = need(doc, path);
    if (!v.is_number()) throw validation_error("config: '" + path + "' must be a number");
    return v.get<double>();
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    ExperimentConfig cfg;
    try {
        cfg.doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw validation_error(std::string("config: invalid JSON: ") + e.what());
    }
    if (!cfg.doc.is_object()) throw validation_error("config: top level must be an object");
    const json& seed = need(cfg.doc, "seed");
    if (!seed.is_number_unsigned() && !seed.is_number_integer())
        throw validation_error("config: 'seed' must be an unsigned integer");
    cfg.master_seed = seed.get<std::uint64_t>();
    if (cfg.doc.contains("threads")) {
        const json& t = cfg.doc["threads"];
        if (!t.is_number_integer() || t.get<int>() < 0)
            throw validation_error("config: 'threads' must be a nonnegative integer");
        cfg.threads = t.get<int>();
    }
    return cfg;
}

bool config_has(const ExperimentConfig& cfg, const std::string& path) {
    return walk(cfg.doc, path) != nullptr;
}

double config_number(const ExperimentConfig& cfg, const std::string& path) {
    return need_number(cfg.doc, path);
}

double config_number_or(const ExperimentConfig& cfg, const std::string& path, double dflt) {
    return walk(cfg.doc, path) ? need_number(cfg.doc, path) : dflt;
}

std::int64_t config_int_or(const ExperimentConfig& cfg, const std::string& path,
                           std::int64_t dflt) {
    const json* p = walk(cfg.doc, path);
    if (!p) return dflt;
    if (!p->is_number_integer() && !p->is_number_unsigned())
        throw validation_error("config: '" + path + "' must be an integer");
    return p->get<std::int64_t>();
}

std::string config_string_or(const ExperimentConfig& cfg, const std::string& path,
                             const std::string& dflt) {
    const json* p = walk(cfg.doc, path);
    if (!p) return dflt;
    if (!p->is_string())
        throw validation_error("config: '" + path + "' must be a string");
    return p->get<std::string>();
}

IntensityModel config_model(const ExperimentConfig& cfg) {
    const json& m = need(cfg.doc, "model");
    const std::string type = need(m, "type").is_string()
                                 ? m["type"].get<std::string>()
                                 : throw validation_error("config: 'model.type' must be a string");
    const double scale = m.contains("scale") ? need_number(m, "scale") : 1.0;
    try {
        if (type == "homogeneous")
            return IntensityModel::homogeneous(need_number(m, "rate"), scale);
        if (type == "radial_power")
            return IntensityModel::radial_power(need_number(m, "alpha"),
                                                need_number(m, "gamma"), scale);
    } catch (const validation_error& e) {
        throw validation_error(std::string("config: model: ") + e.what());
    }
    throw validation_error("config: 'model.type' must be homogeneous or radial_power");
}

Window config_window(const ExperimentConfig& cfg) {
    const json& w = need(cfg.doc, "window");
    const json& kind_v = need(w, "kind");
    if (!kind_v.is_string())
        throw validation_error("config: 'window.kind' must be a string");
    const std::string kind = kind_v.get<std::string>();
    const int dim = static_cast<int>(need_number(w, "dimension"));
    if (dim < 1 || dim > kMaxDim)
        throw validation_error("config: 'window.dimension' must be 1, 2 or 3");

    Point center{0, 0, 0};
    if (w.contains("center")) {
        const json& c = w["center"];
        if (!c.is_array() || static_cast<int>(c.size()) != dim)
            throw validation_error("config: 'window.center' must be an array of length d");
        for (int i = 0; i < dim; ++i) center[i] = c[static_cast<std::size_t>(i)].get<double>();
    }
    try {
        if (kind == "ball") return Window::ball(dim, need_number(w, "radius"), center);
        Point h{0, 0, 0};
        const json& he = need(w, "half_extent");
        if (he.is_number()) {
            for (int i = 0; i < dim; ++i) h[i] = he.get<double>();
        } else if (he.is_array() && static_cast<int>(he.size()) == dim) {
            for (int i = 0; i < dim; ++i) h[i] = he[static_cast<std::size_t>(i)].get<double>();
        } else {
            throw validation_error("must be a number or an array of length d");
        }
        if (kind == "box") return Window::box(dim, h, center);
        if (kind == "torus") return Window::torus(dim, h, center);
    } catch (const validation_error& e) {
        throw validation_error(std::string("config: window: ") + e.what());
    }
    throw validation_error("config: 'window.kind' must be box, ball or torus");
}

Shape config_shape(const ExperimentConfig& cfg, int dim) {
    const json& s = need(cfg.doc, "shape");
    const std::string norm = config_string_or(cfg, "shape.norm", "euclidean");
    const double rho = need_number(s, "rho");
    try {
        if (norm == "euclidean") return Shape::euclidean_ball(rho, dim);
        if (norm == "sup") return Shape::sup_box(rho, dim);
    } catch (const validation_error& e) {
        throw validation_error(std::string("config: shape: ") + e.what());
    }
    throw validation_error("config: 'shape.norm' must be euclidean or sup");
}

Selector config_selector(const ExperimentConfig& cfg) {
    const json& s = need(cfg.doc, "selector");
    const std::string kind = need(s, "kind").is_string()
                                 ? s["kind"].get<std::string>()
                                 : throw validation_error("config: 'selector.kind' must be a string");
    const int k = static_cast<int>(need_number(s, "k"));
    try {
        if (kind == "at_most_k") return Selector::at_most(k);
        if (kind == "exactly_k") return Selector::exactly(k);
        if (kind == "iso_to_h") {
            const json& bits = need(s, "h_bits");
            if (!bits.is_string())
                throw validation_error("'selector.h_bits' must be a string of 0/1");
            return Selector::iso_from_bits(k, bits.get<std::string>());
        }
    } catch (const validation_error& e) {
        throw validation_error(std::string("config: selector: ") + e.what());
    }
    throw validation_error("config: 'selector.kind' must be at_most_k, exactly_k or iso_to_h");
}

RegimeSpec config_regime(const ExperimentConfig& cfg, int dim) {
    const json& r = need(cfg.doc, "regime");
    RegimeSpec spec;
    const std::string kind = need(r, "kind").is_string()
                                 ? r["kind"].get<std::string>()
                                 : throw validation_error("config: 'regime.kind' must be a string");
    if (kind == "sparse") spec.classified = Regime::sparse;
    else if (kind == "thermodynamic") spec.classified = Regime::thermodynamic;
    else if (kind == "dense") spec.classified = Regime::dense;
    else throw validation_error("config: 'regime.kind' must be sparse, thermodynamic or dense");

    const json& tg = need(r, "t_grid");
    if (tg.is_array()) {
        for (const auto& v : tg) spec.t_grid.push_back(v.get<double>());
    } else if (tg.is_object()) {
        const double base = need_number(tg, "base");
        const int from = static_cast<int>(need_number(tg, "from"));
        const int to = static_cast<int>(need_number(tg, "to"));
        const int step = tg.contains("step") ? static_cast<int>(need_number(tg, "step")) : 1;
        if (to < from || step < 1)
            throw validation_error("config: 'regime.t_grid' range is empty");
        for (int e = from; e <= to; e += step) spec.t_grid.push_back(std::pow(base, e));
    } else {
        throw validation_error("config: 'regime.t_grid' must be an array or a range object");
    }

    if (spec.classified == Regime::thermodynamic) {
        spec.c = need_number(r, "c");
        const double c = spec.c;
        const double dd = dim;
        spec.rho_rule = [c, dd](double t) { return std::pow(c / t, 1.0 / dd); };
        std::ostringstream os;
        os << "rho_t=(c/t)^(1/d) with c=" << c;
        spec.rho_desc = os.str();
    } else {
        const json& rr = need(r, "rho_rule");
        const double coeff = rr.contains("coeff") ? need_number(rr, "coeff") : 1.0;
        const double expo = need_number(rr, "exponent");
        spec.rho_rule = [coeff, expo](double t) { return coeff * std::pow(t, expo); };
        std::ostringstream os;
        os << "rho_t=" << coeff << "*t^" << expo;
        spec.rho_desc = os.str();
        if (spec.classified == Regime::dense && r.contains("c"))
            spec.c = need_number(r, "c");
    }
    spec.validate(dim);
    return spec;
}

ExperimentOptions config_experiment_options(const ExperimentConfig& cfg) {
    ExperimentOptions opts;
    opts.replications = config_int_or(cfg, "experiment.replications", opts.replications);
    opts.threads = cfg.threads;
    opts.window_tail_fraction =
        config_number_or(cfg, "experiment.window_tail_fraction", opts.window_tail_fraction);
    opts.base_half_extent =
        config_number_or(cfg, "experiment.base_half_extent", opts.base_half_extent);
    opts.constant_mc_points =
        config_int_or(cfg, "experiment.constant_mc_points", opts.constant_mc_points);
    if (opts.replications < 1)
        throw validation_error("config: 'experiment.replications' must be >= 1");
    if (!(opts.window_tail_fraction > 0.0 && opts.window_tail_fraction < 1.0))
        throw validation_error("config: 'experiment.window_tail_fraction' must be in (0,1)");
    if (opts.base_half_extent <= 0.0)
        throw validation_error("config: 'experiment.base_half_extent' must be > 0");
    if (opts.constant_mc_points < 1000)
        throw validation_error("config: 'experiment.constant_mc_points' must be >= 1000");
    return opts;
}

} // namespace geomconc
