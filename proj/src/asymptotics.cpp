#include "geomconc/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geomconc/parallel.hpp"
#include "geomconc/quad.hpp"
#include "geomconc/rng.hpp"

namespace geomconc {

namespace {

constexpr std::int64_t kFactorial[11] = {1,    1,     2,      6,       24,      120,
                                         720,  5040,  40320,  362880,  3628800};

void require_unit_shape(const Shape& shape) {
    require(std::fabs(shape.rho - 1.0) < 1e-12,
            "asymptotic constants use the unit-scale shape (rho = 1)");
}

void require_base_model(const IntensityModel& model) {
    require(std::fabs(model.scale - 1.0) < 1e-12,
            "asymptotic constants use the unit-scale model (scale = 1)");
}

// indicator I(x) = 1{ {0, x_2..x_k} in A and G_S(0, x_2..x_k) connected }
bool tuple_indicator(const Shape& unit_shape, const Selector& sel,
                     const std::vector<Point>& offsets) {
    const int k = static_cast<int>(offsets.size()) + 1;
    GraphBits bits = 0;
    auto at = [&](int i) -> Point {
        if (i == 0) return Point{0, 0, 0};
        return offsets[static_cast<std::size_t>(i - 1)];
    };
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            const Point a = at(i), b = at(j);
            const Point diff{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
            if (unit_shape.contains(diff)) bits |= GraphBits{1} << triangle_bit_index(k, i, j);
        }
    if (!graph_bits_connected(k, bits)) return false;
    if (!sel.needs_iso()) return true;
    if (graph_degree_key(k, bits) != sel.h_degree_key) return false;
    return canonical_form(k, bits) == sel.h_code;
}

Point uniform_in_ball(Rng& rng, int d, double radius) {
    for (;;) {
        Point p{0, 0, 0};
        double s2 = 0.0;
        for (int i = 0; i < d; ++i) {
            p[i] = rng.uniform(-radius, radius);
            s2 += sq(p[i]);
        }
        if (s2 <= radius * radius) return p;
    }
}

// ---- radial closed forms for r^{d-1} (1+r)^{-n} ---------------------------

double radial_total(int d, double n) {
    switch (d) {
        case 1: return 1.0 / (n - 1.0);
        case 2: return 1.0 / (n - 2.0) - 1.0 / (n - 1.0);
        default:
            return 1.0 / (n - 3.0) - 2.0 / (n - 2.0) + 1.0 / (n - 1.0);
    }
}

double radial_tail(int d, double n, double r) {
    const double u = 1.0 + r;
    switch (d) {
        case 1: return std::pow(u, 1.0 - n) / (n - 1.0);
        case 2:
            return std::pow(u, 2.0 - n) / (n - 2.0) - std::pow(u, 1.0 - n) / (n - 1.0);
        default:
            return std::pow(u, 3.0 - n) / (n - 3.0) -
                   2.0 * std::pow(u, 2.0 - n) / (n - 2.0) +
                   std::pow(u, 1.0 - n) / (n - 1.0);
    }
}

// inverse CDF of the radius with density proportional to r^{d-1} (1+r)^{-n};
// deterministic bisection on the closed-form CDF
double mk_radius_from_quantile(double u, int d, double n) {
    const double total = radial_total(d, n);
    const double target = u * total; // mass of [0, r]
    double lo = 0.0, hi = 1.0;
    while (total - radial_tail(d, n, hi) < target) hi *= 2.0;
    for (int it = 0; it < 70; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (total - radial_tail(d, n, mid) < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double integrable_mk(const IntensityModel& model, int k, int dim) {
    if (model.kind == ModelKind::radial_power) {
        if (!(model.gamma * k > dim))
            throw validation_error("m^k is not integrable: gamma*k <= d");
        return radial_power_mk_integral(model, k, dim);
    }
    if (model.kind == ModelKind::custom && model.mk_integral_declared)
        return *model.mk_integral_declared;
    throw validation_error(
        "radial power model or custom model with a declared m^k integral required");
}

} // namespace

// ---------------------------------------------------------------------------
// RegimeSpec

void RegimeSpec::validate(int dim) const {
    require(!t_grid.empty(), "t grid must be nonempty");
    require(static_cast<bool>(rho_rule), "rho rule required");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        require(t_grid[i] > 0.0, "t values must be > 0");
        if (i > 0) require(t_grid[i] > t_grid[i - 1], "t grid must be increasing");
        require(rho_rule(t_grid[i]) > 0.0, "rho_t must be > 0");
    }
    std::vector<double> s;
    for (const double t : t_grid) s.push_back(t * std::pow(rho_rule(t), dim));
    switch (classified) {
        case Regime::sparse:
            for (std::size_t i = 1; i < s.size(); ++i)
                require(s[i] < s[i - 1], "sparse regime needs t*rho^d decreasing");
            break;
        case Regime::dense:
            for (std::size_t i = 1; i < s.size(); ++i)
                require(s[i] > s[i - 1], "dense regime needs t*rho^d increasing");
            break;
        case Regime::thermodynamic: {
            require(c > 0.0, "thermodynamic regime needs its limit c > 0");
            for (const double v : s)
                require(std::fabs(v - c) <= 1e-6 * c,
                        "thermodynamic regime needs t*rho^d within 1e-6 of c");
            break;
        }
    }
    if (classified != Regime::dense) {
        require(rho_rule(t_grid.back()) <= rho_rule(t_grid.front()),
                "rho_t must decrease along the grid");
    }
}

// ---------------------------------------------------------------------------
// Exact expectation integral on a window

namespace {

Point uniform_in_shape(Rng& rng, const Shape& s) {
    if (s.norm == Norm::sup) {
        Point p{0, 0, 0};
        for (int i = 0; i < s.dim; ++i) p[i] = rng.uniform(-s.rho, s.rho);
        return p;
    }
    return uniform_in_ball(rng, s.dim, s.rho);
}

// mu(union of (S + pts_i) intersected with W) by mixture sampling over the
// translates, with multiplicity correction; exact in expectation
double union_mass_mc(const IntensityModel& model, const Window& window,
                     const Shape& shape, const std::vector<Point>& pts, Rng& rng,
                     int n_inner, double* variance_out) {
    const int d = window.dim;
    const int k = static_cast<int>(pts.size());
    const double mix_mass = double(k) * shape.volume();
    double isum = 0.0, iss = 0.0;
    for (int s = 0; s < n_inner; ++s) {
        const std::int64_t pick = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(k)));
        Point x = pts[static_cast<std::size_t>(pick)];
        const Point off = uniform_in_shape(rng, shape);
        for (int a = 0; a < d; ++a) x[a] += off[a];
        double val = 0.0;
        if (window.contains(x)) {
            std::int64_t mult = 0;
            for (int i = 0; i < k; ++i) {
                const Point diff = window.diff(x, pts[static_cast<std::size_t>(i)]);
                if (shape.contains(diff)) ++mult;
            }
            if (mult > 0)
                val = model.intensity_at(x, d) * mix_mass / static_cast<double>(mult);
        }
        isum += val;
        iss += val * val;
    }
    const double mean = isum / n_inner;
    if (variance_out)
        *variance_out = std::max(0.0, iss / n_inner - mean * mean) / n_inner;
    return mean;
}

} // namespace

ValueWithError expected_count_exact(const IntensityModel& model, const Shape& shape,
                                    const Selector& selector, const Window& window,
                                    std::int64_t mc_points, std::uint64_t seed) {
    require(selector.fixed_size(), "fixed-size selector required");
    const int k = selector.k;
    if (k > 4) throw std::runtime_error("use simulation estimate");
    require(mc_points >= 1000, "need at least 10^3 MC points");
    window.validate();
    model.validate();
    if (window.torus_like()) {
        require(model.kind == ModelKind::homogeneous,
                "torus windows require a homogeneous intensity model");
        for (int a = 0; a < window.dim; ++a)
            require(2.0 * k * shape.reach() <= window.half_extent[a],
                    "shape too large for the exact torus expectation");
    }

    const int d = window.dim;
    const double mass = model.mass(window);
    ValueWithError out;
    out.evals = mc_points;
    if (mass <= 0.0) return out;

    // rejection sampler for one point from mu restricted to the window
    Point lo, hi;
    window.bounds(lo, hi);
    double sup_w = model.sup_density();
    if (model.kind == ModelKind::radial_power) {
        double c2 = 0.0;
        for (int a = 0; a < d; ++a) {
            double nearest = 0.0;
            if (lo[a] > 0.0) nearest = lo[a];
            else if (hi[a] < 0.0) nearest = hi[a];
            c2 += sq(nearest);
        }
        sup_w = model.alpha * std::pow(std::sqrt(c2) + 1.0, -model.gamma);
    }

    Rng rng = Rng::stream(seed, 0xE0E0);
    double sum = 0.0, ss = 0.0, bias_sum = 0.0;
    std::vector<Point> pts(static_cast<std::size_t>(k));
    std::vector<Point> offsets;
    for (std::int64_t it = 0; it < mc_points; ++it) {
        for (int i = 0; i < k; ++i) {
            for (;;) {
                Point p{0, 0, 0};
                for (int a = 0; a < d; ++a) p[a] = rng.uniform(lo[a], hi[a]);
                if (!window.contains(p)) continue;
                if (rng.u01() * sup_w < model.density_at(p, d)) {
                    pts[static_cast<std::size_t>(i)] = p;
                    break;
                }
            }
        }
        offsets.clear();
        for (int i = 1; i < k; ++i)
            offsets.push_back(window.diff(pts[static_cast<std::size_t>(i)], pts[0]));

        double g = 0.0;
        if (tuple_indicator(shape, selector, offsets)) {
            // exact union mass where the union of translates sits inside the
            // window (always true on a torus); nested MC otherwise
            bool exact_union = model.kind == ModelKind::homogeneous && k <= 2;
            if (exact_union && !window.torus_like()) {
                for (int i = 0; i < k && exact_union; ++i)
                    exact_union = window.contains_eroded(pts[static_cast<std::size_t>(i)],
                                                         shape.reach());
            }
            double v = 0.0, v_var = 0.0;
            if (exact_union) {
                const UnionVolume uv = union_volume(shape, offsets);
                v = model.scale * model.rate * uv.value;
            } else {
                Rng inner = Rng::stream(seed, 0xF0000000ULL + static_cast<std::uint64_t>(it));
                v = union_mass_mc(model, window, shape, pts, inner, 2048, &v_var);
            }
            g = std::exp(-v);
            bias_sum += g * 0.5 * v_var; // second-order bias bound of exp(-v_hat)
        }
        sum += g;
        ss += g * g;
    }
    const double nn = static_cast<double>(mc_points);
    const double mean_g = sum / nn;
    const double var_g = std::max(0.0, ss / nn - mean_g * mean_g) / nn;
    const double factor = std::pow(mass, k) / static_cast<double>(kFactorial[k]);
    out.value = factor * mean_g;
    out.std_error = factor * (std::sqrt(var_g) + bias_sum / nn);
    return out;
}

// ---------------------------------------------------------------------------
// Regime constants

AsymptoticsReport sparse_constant(const Shape& shape, const Selector& selector,
                                  const IntensityModel& model, std::int64_t mc_points,
                                  std::uint64_t seed) {
    require_unit_shape(shape);
    require_base_model(model);
    require(selector.fixed_size(), "fixed-size selector required");
    const int k = selector.k;
    const int d = shape.dim;
    const double mk = integrable_mk(model, k, d);

    AsymptoticsReport rep;
    rep.constant_name = "s";
    if (k == 1) {
        rep.value = mk; // the inner integral degenerates to 1
        return rep;
    }

    const double support_r = double(k - 1) * shape.theta();
    const double vol_each = quad::ball_volume(d, support_r);
    Rng rng = Rng::stream(seed, 0x5A);
    std::int64_t hits = 0;
    std::vector<Point> offsets(static_cast<std::size_t>(k - 1));
    for (std::int64_t it = 0; it < mc_points; ++it) {
        for (int i = 0; i < k - 1; ++i)
            offsets[static_cast<std::size_t>(i)] = uniform_in_ball(rng, d, support_r);
        if (tuple_indicator(shape, selector, offsets)) ++hits;
    }
    const double nn = static_cast<double>(mc_points);
    const double p = static_cast<double>(hits) / nn;
    const double vol_pow = std::pow(vol_each, k - 1);
    rep.value = mk / static_cast<double>(kFactorial[k]) * vol_pow * p;
    rep.std_error = mk / static_cast<double>(kFactorial[k]) * vol_pow *
                    std::sqrt(std::max(p * (1.0 - p), 0.0) / nn);
    rep.integrand_eval_count = mc_points;
    return rep;
}

AsymptoticsReport thermo_constant(const Shape& shape, const Selector& selector,
                                  const IntensityModel& model, double c,
                                  std::int64_t mc_points, std::uint64_t seed) {
    require_unit_shape(shape);
    require_base_model(model);
    require(selector.fixed_size(), "fixed-size selector required");
    require(c > 0.0, "thermodynamic limit c must be > 0");
    require(model.kind == ModelKind::radial_power,
            "thermodynamic constant integrator requires the radial power model");
    const int k = selector.k;
    const int d = shape.dim;
    const double mk = integrable_mk(model, k, d); // also validates gamma*k > d
    const double n_exp = model.gamma * k;

    const double support_r = double(k - 1) * shape.theta();
    const double vol_each = k > 1 ? quad::ball_volume(d, support_r) : 1.0;
    const double vol_pow = std::pow(vol_each, k - 1);

    // antithetic pairs in the radial quantile; the exponential factor is
    // monotone in the radius, which cuts the variance substantially
    Rng rng = Rng::stream(seed, 0x7E);
    const std::int64_t pairs = std::max<std::int64_t>(1, mc_points / 2);
    double sum = 0.0, ss = 0.0;
    std::vector<Point> offsets(static_cast<std::size_t>(k - 1));
    auto half_sample = [&](double u, std::uint64_t uv_seed) {
        const double r1 = mk_radius_from_quantile(u, d, n_exp);
        for (int i = 0; i < k - 1; ++i)
            offsets[static_cast<std::size_t>(i)] = uniform_in_ball(rng, d, support_r);
        if (!tuple_indicator(shape, selector, offsets)) return 0.0;
        const UnionVolume uv = union_volume(shape, offsets, 5e-3, uv_seed);
        const double m1 = model.alpha * std::pow(1.0 + r1, -model.gamma);
        return std::exp(-c * uv.value * m1);
    };
    for (std::int64_t it = 0; it < pairs; ++it) {
        const double u = rng.u01_pos();
        const double g1 = half_sample(u, derive_seed(seed, 2 * static_cast<std::uint64_t>(it)));
        const double g2 = half_sample(std::max(1e-17, 1.0 - u),
                                      derive_seed(seed, 2 * static_cast<std::uint64_t>(it) + 1));
        const double g = 0.5 * (g1 + g2);
        sum += g;
        ss += g * g;
    }
    const double nn = static_cast<double>(pairs);
    const double mean_g = sum / nn;
    const double var_g = std::max(0.0, ss / nn - mean_g * mean_g) / nn;
    const double factor =
        std::pow(c, k - 1) / static_cast<double>(kFactorial[k]) * mk * vol_pow;

    AsymptoticsReport rep;
    rep.constant_name = "t";
    rep.value = factor * mean_g;
    rep.std_error = factor * std::sqrt(var_g);
    rep.integrand_eval_count = mc_points;
    return rep;
}

AsymptoticsReport dense_constant(const Shape& shape, const Selector& selector,
                                 const IntensityModel& model, std::int64_t mc_points,
                                 std::uint64_t seed) {
    require_unit_shape(shape);
    require_base_model(model);
    require(selector.fixed_size(), "fixed-size selector required");
    if (model.kind != ModelKind::radial_power)
        throw validation_error(
            "dense constant is only defined for the radial power model");
    const int k = selector.k;
    const int d = shape.dim;
    if (!(model.gamma * k > d))
        throw validation_error("m^k is not integrable: gamma*k <= d");
    const double gk = model.gamma * k;
    const double alpha = model.alpha;

    // importance density for the x1 radius: proportional to
    // r^{d-1} min(r^{-gk}, r0^{-gk}), the bounded envelope of the integrand
    const double r0 = std::pow(alpha * shape.volume() / k, 1.0 / model.gamma);
    const double head = std::pow(r0, double(d) - gk) / d;          // [0, r0]
    const double tail = std::pow(r0, double(d) - gk) / (gk - d);   // [r0, inf)
    const double norm = head + tail;

    const double support_r = double(k - 1) * shape.theta();
    const double vol_each = k > 1 ? quad::ball_volume(d, support_r) : 1.0;
    const double vol_pow = std::pow(vol_each, k - 1);

    Rng rng = Rng::stream(seed, 0xDE);
    double sum = 0.0, ss = 0.0;
    std::vector<Point> offsets(static_cast<std::size_t>(k - 1));
    for (std::int64_t it = 0; it < mc_points; ++it) {
        // inverse CDF of the piecewise radial density
        const double u = rng.u01_pos();
        double r1;
        if (u * norm <= head) {
            r1 = std::pow(u * norm * d * std::pow(r0, gk), 1.0 / d);
        } else {
            const double rest = norm - u * norm; // mass of [r1, inf)
            r1 = std::pow(rest * (gk - d), 1.0 / (double(d) - gk));
        }
        for (int i = 0; i < k - 1; ++i)
            offsets[static_cast<std::size_t>(i)] = uniform_in_ball(rng, d, support_r);
        double g = 0.0;
        if (tuple_indicator(shape, selector, offsets)) {
            const UnionVolume uv = union_volume(shape, offsets, 5e-3,
                                                derive_seed(seed, 0xFACE + static_cast<std::uint64_t>(it)));
            // log of ||x1||^{-gk} / min(r^{-gk}, r0^{-gk}) minus the exponent
            const double log_ratio = r1 < r0 ? gk * (std::log(r0) - std::log(r1)) : 0.0;
            const double exponent = alpha * std::pow(r1, -model.gamma) * uv.value;
            g = std::exp(log_ratio - exponent);
        }
        sum += g;
        ss += g * g;
    }
    const double nn = static_cast<double>(mc_points);
    const double mean_g = sum / nn;
    const double var_g = std::max(0.0, ss / nn - mean_g * mean_g) / nn;
    const double factor = std::pow(alpha, k) / static_cast<double>(kFactorial[k]) *
                          norm * quad::sphere_surface(d) * vol_pow;

    AsymptoticsReport rep;
    rep.constant_name = "d";
    rep.value = factor * mean_g;
    rep.std_error = factor * std::sqrt(var_g);
    rep.integrand_eval_count = mc_points;
    return rep;
}

// ---------------------------------------------------------------------------
// Experiment drivers

Window experiment_window(const IntensityModel& model, const Shape& unit_shape,
                         const Selector& selector, double t, double rho_t,
                         Regime /*regime*/, const ExperimentOptions& opts) {
    const int d = unit_shape.dim;
    if (model.kind == ModelKind::homogeneous) {
        Point h{opts.base_half_extent, opts.base_half_extent, opts.base_half_extent};
        return Window::torus(d, h);
    }
    require(model.kind == ModelKind::radial_power,
            "experiment windows support homogeneous and radial power models");
    const int k = selector.k;
    const double total = radial_power_mk_integral(model, k, d);
    // dense-regime contributions move outward like (t rho^d)^{1/gamma}; the
    // m^k tail budget shrinks accordingly
    const double s = t * std::pow(rho_t, d);
    const double factor = std::max(1.0, std::pow(s, k - double(d) / model.gamma));
    const double budget = opts.window_tail_fraction * total / factor;
    double R = quad::bisect(
        [&](double logR) {
            const double RR = std::exp(logR);
            return budget - radial_power_mk_tail(model, k, d, RR);
        },
        std::log(1e-3), std::log(1e9));
    R = std::exp(R);
    R = std::max({R, opts.base_half_extent, 4.0 * k * unit_shape.theta() * rho_t});
    Point h{R, R, R};
    return Window::box(d, h);
}

namespace {

AsymptoticsReport limit_constant(Regime regime, const Shape& shape,
                                 const Selector& selector, const IntensityModel& model,
                                 double c, std::int64_t mc_points, std::uint64_t seed) {
    switch (regime) {
        case Regime::sparse: return sparse_constant(shape, selector, model, mc_points, seed);
        case Regime::thermodynamic:
            return thermo_constant(shape, selector, model, c, mc_points, seed);
        case Regime::dense: return dense_constant(shape, selector, model, mc_points, seed);
    }
    throw validation_error("unknown regime");
}

double scaled_expectation(Regime regime, const IntensityModel& model, double mean_f,
                          double t, double rho, int d, int k) {
    switch (regime) {
        case Regime::sparse:
            return mean_f / (std::pow(t, k) * std::pow(rho, double(d) * (k - 1)));
        case Regime::thermodynamic: return mean_f / t;
        case Regime::dense: {
            const double s = t * std::pow(rho, d);
            return mean_f / (t * std::pow(s, double(d) / model.gamma - 1.0));
        }
    }
    return 0.0;
}

} // namespace

AsymptoticsReport regime_experiment(const RegimeSpec& regime, const Shape& shape,
                                    const Selector& selector, const IntensityModel& model,
                                    const ExperimentOptions& opts, std::uint64_t master_seed) {
    require_unit_shape(shape);
    require_base_model(model);
    require(selector.fixed_size(), "fixed-size selector required");
    regime.validate(shape.dim);
    if (regime.classified == Regime::dense)
        require(model.kind == ModelKind::radial_power,
                "dense regime requires the radial power model");

    AsymptoticsReport constant =
        limit_constant(regime.classified, shape, selector, model, regime.c,
                       opts.constant_mc_points, derive_seed(master_seed, 0xC0));

    const int d = shape.dim;
    const int k = selector.k;
    const bool sparse_mode = regime.classified == Regime::sparse;
    const double sup_m = model.sup_density();

    AsymptoticsReport rep = constant;
    for (std::size_t ti = 0; ti < regime.t_grid.size(); ++ti) {
        const double t = regime.t_grid[ti];
        const double rho = regime.rho_rule(t);
        const Shape scaled_shape = shape.scaled(rho);
        IntensityModel model_t = model;
        model_t.scale = t;
        const Window window =
            experiment_window(model, shape, selector, t, rho, regime.classified, opts);

        const std::int64_t reps = opts.replications;
        std::vector<std::int64_t> f_raw(static_cast<std::size_t>(reps), 0);
        std::vector<std::int64_t> f_eroded(static_cast<std::size_t>(reps), 0);
        std::vector<std::int64_t> u_vals(static_cast<std::size_t>(reps), 0);
        const Selector selectors[1] = {selector};

        parallel_tasks(reps, opts.threads, [&](std::int64_t r) {
            const std::uint64_t stream =
                (static_cast<std::uint64_t>(ti) << 40) | static_cast<std::uint64_t>(r);
            PointConfig cfg = sample_poisson(model_t, window, master_seed, stream);
            const bool want_edges = sparse_mode && k == 2;
            const SmallCompCounts counts = count_small_components(
                cfg.points, window, scaled_shape, selectors, want_edges);
            f_raw[static_cast<std::size_t>(r)] = counts.raw[0];
            f_eroded[static_cast<std::size_t>(r)] = counts.eroded[0];
            if (sparse_mode) {
                if (k == 1) {
                    u_vals[static_cast<std::size_t>(r)] =
                        static_cast<std::int64_t>(cfg.points.size());
                } else if (k == 2) {
                    u_vals[static_cast<std::size_t>(r)] = 2 * counts.edges;
                } else {
                    const GeomGraph g = build_graph(cfg, scaled_shape);
                    u_vals[static_cast<std::size_t>(r)] = count_u(g, selector);
                }
            }
        });

        double sum_raw = 0.0, sum_eroded = 0.0, sum_u = 0.0, ss_eroded = 0.0;
        for (std::int64_t r = 0; r < reps; ++r) {
            sum_raw += static_cast<double>(f_raw[static_cast<std::size_t>(r)]);
            sum_eroded += static_cast<double>(f_eroded[static_cast<std::size_t>(r)]);
            sum_u += static_cast<double>(u_vals[static_cast<std::size_t>(r)]);
        }
        const double mean_raw = sum_raw / static_cast<double>(reps);
        const double mean_eroded = sum_eroded / static_cast<double>(reps);
        const double mean_u = sum_u / static_cast<double>(reps);
        for (std::int64_t r = 0; r < reps; ++r)
            ss_eroded += sq(static_cast<double>(f_eroded[static_cast<std::size_t>(r)]) -
                            mean_eroded);
        const double se_eroded =
            reps > 1 ? std::sqrt(ss_eroded / (static_cast<double>(reps - 1) *
                                              static_cast<double>(reps)))
                     : 0.0;

        RegimeRow row;
        row.t = t;
        row.rho = rho;
        row.t_rho_d = t * std::pow(rho, d);
        row.mean_f_raw = mean_raw;
        row.mean_f_eroded = mean_eroded;
        row.mean_f_se = se_eroded;
        row.mean_u = mean_u;
        row.window_half_extent = window.half_extent[0];
        if (model.kind == ModelKind::radial_power) {
            // truncation bias of the window, as an m^k tail mass fraction
            row.window_tail_bias =
                radial_power_mk_tail(model, k, d, window.half_extent[0]) /
                radial_power_mk_integral(model, k, d);
        }
        row.replications = reps;
        row.scaled = scaled_expectation(regime.classified, model, mean_eroded, t, rho, d, k);
        row.ratio_to_limit = constant.value != 0.0 ? row.scaled / constant.value : 0.0;
        if (sparse_mode) {
            row.kfact_f_over_u =
                mean_u > 0.0
                    ? static_cast<double>(kFactorial[k]) * mean_raw / mean_u
                    : 1.0; // 0/0 convention
            row.bracket_lo =
                std::exp(-row.t_rho_d * k * shape.volume() * sup_m);
        }
        rep.table.push_back(row);
    }
    return rep;
}

StrongLawReport strong_law_experiment(const RegimeSpec& regime, const Shape& shape,
                                      const Selector& selector, const IntensityModel& model,
                                      const ExperimentOptions& opts, std::uint64_t master_seed) {
    require_unit_shape(shape);
    require_base_model(model);
    require(selector.fixed_size(), "fixed-size selector required");
    regime.validate(shape.dim);

    AsymptoticsReport constant =
        limit_constant(regime.classified, shape, selector, model, regime.c,
                       opts.constant_mc_points, derive_seed(master_seed, 0xC1));

    const int d = shape.dim;
    const int k = selector.k;

    StrongLawReport out;
    out.limit = constant.value;

    // numeric check of the growth condition along the grid
    auto growth = [&](double t) {
        const double rho = regime.rho_rule(t);
        if (regime.classified == Regime::dense) {
            const double s = t * std::pow(rho, d);
            return t * std::pow(s, double(d) / model.gamma - 2.0) / std::log(t);
        }
        return std::pow(t, k) * std::pow(rho, double(d) * (k - 1)) / std::log(t);
    };
    {
        const double g_first = growth(std::max(regime.t_grid.front(), 2.0));
        const double g_last = growth(regime.t_grid.back());
        out.growth_condition_ok = g_last > g_first && g_last > 1.0;
        std::ostringstream os;
        os << "growth statistic " << g_first << " -> " << g_last
           << (out.growth_condition_ok ? " (increasing)" : " (condition violated)");
        out.growth_note = os.str();
    }

    out.rows.resize(regime.t_grid.size());
    const Selector selectors[1] = {selector};
    parallel_tasks(static_cast<std::int64_t>(regime.t_grid.size()), opts.threads,
                   [&](std::int64_t ti) {
        const double t = regime.t_grid[static_cast<std::size_t>(ti)];
        const double rho = regime.rho_rule(t);
        const Shape scaled_shape = shape.scaled(rho);
        IntensityModel model_t = model;
        model_t.scale = t;
        const Window window =
            experiment_window(model, shape, selector, t, rho, regime.classified, opts);
        const std::uint64_t stream = 0x51AA000000000000ULL + static_cast<std::uint64_t>(ti);
        PointConfig cfg = sample_poisson(model_t, window, master_seed, stream);
        const SmallCompCounts counts =
            count_small_components(cfg.points, window, scaled_shape, selectors, false);
        StrongLawRow row;
        row.t = t;
        row.rho = rho;
        row.scaled = scaled_expectation(regime.classified, model,
                                        static_cast<double>(counts.eroded[0]), t, rho, d, k);
        row.deviation = std::fabs(row.scaled - constant.value);
        out.rows[static_cast<std::size_t>(ti)] = row;
    });

    double running = 0.0;
    for (std::size_t i = out.rows.size(); i-- > 0;) {
        running = std::max(running, out.rows[i].deviation);
        out.rows[i].tail_max_dev = running;
    }
    return out;
}

} // namespace geomconc
