#include "geomconc/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geomconc/parallel.hpp"

namespace geomconc {

// ---------------------------------------------------------------------------
// Analytic functions

double psi(double z) {
    if (std::fabs(z) < 1e-4) {
        // psi(z) = sum_{m>=2} (m-1) z^m / m!
        return z * z * (0.5 + z * (1.0 / 3.0 + z * (0.125 + z / 30.0)));
    }
    return z * std::exp(z) - std::exp(z) + 1.0;
}

double phi(double z) {
    if (std::fabs(z) < 1e-4) {
        return z * z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
    }
    return std::expm1(z) - z;
}

bool psi_ratio_bound_check(double a, double z) {
    require(a > 0.0 && z > 0.0, "psi ratio bound needs a > 0 and z > 0");
    const double q = psi(z);
    const double lhs = (a * q / (z * z)) / (1.0 + a * q / z);
    const double rhs = std::max(a, 4.0 / 3.0) / 2.0;
    return lhs <= rhs;
}

bool psi_bound_check(double z) {
    require(z > 0.0, "psi bound check needs z > 0");
    return psi(z) * (1.0 - 2.0 * z / 3.0) <= 0.5 * z * z;
}

LemmaSweepResult lemma_sweep(std::int64_t points, double a_max, double z_max) {
    require(points > 0, "sweep needs a positive point count");
    LemmaSweepResult res;
    res.points = points;
    // additive quasi-random lattice from the plastic constant
    const double g1 = 0.7548776662466927;
    const double g2 = 0.5698402909980532;
    double x = 0.5, y = 0.5;
    for (std::int64_t n = 0; n < points; ++n) {
        x += g1;
        x -= std::floor(x);
        y += g2;
        y -= std::floor(y);
        const double a = a_max * (x > 0.0 ? x : 1.0);
        const double z = z_max * (y > 0.0 ? y : 1.0);
        const double q = psi(z);
        const double lhs = (a * q / (z * z)) / (1.0 + a * q / z);
        const double rhs = std::max(a, 4.0 / 3.0) / 2.0;
        if (lhs > rhs) {
            ++res.lemma_violations;
            res.max_lemma_slack = std::max(res.max_lemma_slack, lhs - rhs);
        }
        if (q * (1.0 - 2.0 * z / 3.0) > 0.5 * z * z) ++res.psi_bound_violations;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Tail bounds

double upper_tail_bound(double r, const BoundParams& p) {
    require(r >= 0.0, "r must be >= 0");
    if (r == 0.0) return 1.0;
    const double a = p.a();
    return std::exp(-(r * r) / (a * (2.0 * p.mean_f + r)));
}

double lower_tail_bound(double r, const BoundParams& p) {
    require(r >= 0.0, "r must be >= 0");
    if (r == 0.0) return 1.0;
    if (p.mean_f == 0.0) return 0.0; // F >= 0 a.s.; it cannot drop below mean 0
    const double denom = 2.0 * std::max(p.a(), 4.0 * p.c_s / 3.0) * p.mean_f;
    return std::exp(-(r * r) / denom);
}

WilsonInterval wilson99(std::int64_t successes, std::int64_t n) {
    require(n > 0 && successes >= 0 && successes <= n, "invalid Wilson input");
    const double z = 2.5758293035489004; // 99% two-sided normal quantile
    const double z2 = z * z;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    WilsonInterval w;
    w.lo = std::max(0.0, center - half);
    w.hi = std::min(1.0, center + half);
    return w;
}

// ---------------------------------------------------------------------------
// Empirical tails

namespace detail {

std::vector<std::int64_t> tail_replicates(const IntensityModel& model,
                                          const Window& window, const Shape& shape,
                                          const Selector& selector,
                                          std::int64_t n_replications,
                                          std::uint64_t master_seed, int threads) {
    std::vector<std::int64_t> values(static_cast<std::size_t>(n_replications), 0);
    const Selector selectors[1] = {selector};
    parallel_tasks(n_replications, threads, [&](std::int64_t i) {
        PointConfig cfg = sample_poisson(model, window, master_seed,
                                         static_cast<std::uint64_t>(i));
        const SmallCompCounts counts =
            count_small_components(cfg.points, window, shape, selectors, false);
        values[static_cast<std::size_t>(i)] = counts.raw[0];
    });
    return values;
}

} // namespace detail

static TailReport finalize_tails(std::vector<std::int64_t> values,
                                 const IntensityModel& model, const Shape& shape,
                                 const Selector& selector,
                                 const std::vector<double>& r_grid,
                                 std::int64_t n_replications, std::uint64_t master_seed) {
    for (const double r : r_grid) require(r >= 0.0, "r grid values must be >= 0");
    TailReport rep;
    rep.r_grid = r_grid;
    rep.n_replications = n_replications;
    rep.master_seed = master_seed;
    rep.f_values = std::move(values);

    double sum = 0.0;
    for (const std::int64_t v : rep.f_values) sum += static_cast<double>(v);
    const double mean = sum / static_cast<double>(n_replications);
    double ss = 0.0;
    for (const std::int64_t v : rep.f_values) ss += sq(static_cast<double>(v) - mean);
    const double var = n_replications > 1 ? ss / static_cast<double>(n_replications - 1) : 0.0;

    const SigmaResult sigma = sigma_s(model, shape);
    const PackingResult pack = packing_constant(shape);
    rep.params.k = selector.k;
    rep.params.c_s = pack.usable();
    rep.params.sigma = sigma.value;
    rep.params.mean_f = mean;
    rep.params.mean_source = "plug-in";
    rep.params.cs_certified = pack.certified();
    rep.cs_certified = pack.certified();
    rep.mean_f = mean;
    rep.mean_f_se = std::sqrt(var / static_cast<double>(n_replications));
    rep.var_f = var;

    const double a = rep.params.a();
    const double v1 = a * 2.0 * mean;
    const double w = a;
    const double v2 = std::max(a, 4.0 * rep.params.c_s / 3.0) * mean;
    rep.var_bound = 2.0 * v2 + 4.0 * v1 + 8.0 * w * w;

    for (const double r : r_grid) {
        std::int64_t up = 0, down = 0;
        for (const std::int64_t v : rep.f_values) {
            if (static_cast<double>(v) >= mean + r) ++up;
            if (static_cast<double>(v) <= mean - r) ++down;
        }
        const double ub = upper_tail_bound(r, rep.params);
        const double lb = lower_tail_bound(r, rep.params);
        const WilsonInterval wu = wilson99(up, n_replications);
        const WilsonInterval wl = wilson99(down, n_replications);
        const double pu = static_cast<double>(up) / static_cast<double>(n_replications);
        const double pl = static_cast<double>(down) / static_cast<double>(n_replications);
        rep.upper_bound.push_back(ub);
        rep.lower_bound.push_back(lb);
        rep.upper_emp.push_back(pu);
        rep.lower_emp.push_back(pl);
        rep.upper_lo.push_back(wu.lo);
        rep.upper_hi.push_back(wu.hi);
        rep.lower_lo.push_back(wl.lo);
        rep.lower_hi.push_back(wl.hi);

        const double hw_u = 0.5 * (wu.hi - wu.lo);
        const double hw_l = 0.5 * (wl.hi - wl.lo);
        if (pu > ub + 5.0 * hw_u || pl > lb + 5.0 * hw_l) {
            std::ostringstream os;
            os << "tail bound violated far beyond sampling error: r=" << r
               << " upper_emp=" << pu << " upper_bound=" << ub << " lower_emp=" << pl
               << " lower_bound=" << lb << " n=" << n_replications
               << " seed=" << master_seed;
            throw std::runtime_error(os.str());
        }
    }
    return rep;
}

TailReport empirical_tails(const IntensityModel& model, const Window& window,
                           const Shape& shape, const Selector& selector,
                           const std::vector<double>& r_grid,
                           std::int64_t n_replications, std::uint64_t master_seed,
                           int threads) {
    require(n_replications >= 1000, "tails need at least 10^3 replications");
    std::vector<std::int64_t> values = detail::tail_replicates(
        model, window, shape, selector, n_replications, master_seed, threads);
    return finalize_tails(std::move(values), model, shape, selector, r_grid,
                          n_replications, master_seed);
}

TailReport empirical_tails_auto(const IntensityModel& model, const Window& window,
                                const Shape& shape, const Selector& selector,
                                int count, double sqrt_mean_mult,
                                std::int64_t n_replications, std::uint64_t master_seed,
                                int threads) {
    require(n_replications >= 1000, "tails need at least 10^3 replications");
    require(count >= 2, "auto r grid needs at least 2 points");
    require(sqrt_mean_mult > 0.0, "auto r grid multiplier must be > 0");
    std::vector<std::int64_t> values = detail::tail_replicates(
        model, window, shape, selector, n_replications, master_seed, threads);
    double mean = 0.0;
    for (const std::int64_t v : values) mean += static_cast<double>(v);
    mean /= static_cast<double>(n_replications);
    const double r_max = sqrt_mean_mult * std::sqrt(std::max(mean, 0.0));
    std::vector<double> grid;
    for (int i = 0; i < count; ++i)
        grid.push_back(r_max * static_cast<double>(i) / static_cast<double>(count - 1));
    return finalize_tails(std::move(values), model, shape, selector, grid,
                          n_replications, master_seed);
}

// ---------------------------------------------------------------------------
// Condition (self-bounding inequality) checker

namespace {

Point uniform_in_shape(Rng& rng, const Shape& s) {
    for (;;) {
        Point p{0, 0, 0};
        for (int i = 0; i < s.dim; ++i) p[i] = rng.uniform(-s.rho, s.rho);
        if (s.contains(p)) return p;
    }
}

} // namespace

ConditionRecord condition_check(const PointConfig& config, const Shape& shape,
                                const Selector& selector, const IntensityModel& model,
                                std::int64_t mc_points, std::uint64_t seed) {
    require(mc_points >= 1000, "condition check needs at least 10^3 MC points");
    ConditionRecord rec;

    DiffOps ops(config, shape);
    rec.f = ops.count_f(selector);

    const SigmaResult sigma = sigma_s(model, shape);
    const PackingResult pack = packing_constant(shape);
    const int c_s = pack.usable();
    rec.cs_certified = pack.certified();
    rec.a = selector.k * (double(c_s) * c_s * sigma.value + 1.0);

    std::int64_t sum_plus_sq = 0;
    const std::int32_t n = static_cast<std::int32_t>(config.points.size());
    for (std::int32_t i = 0; i < n; ++i) {
        const std::int64_t d = ops.remove_one_cost(selector, i);
        if (d > 0) sum_plus_sq += d * d;
    }
    rec.sum_term = static_cast<double>(sum_plus_sq);
    rec.sum_leq_kf = sum_plus_sq <= static_cast<std::int64_t>(selector.k) * rec.f;

    // vertices of selector-matching components: the negative part of D_x F
    // is supported on union(S + y) over these y
    std::vector<std::int32_t> selected;
    for (std::int32_t c = 0; c < static_cast<std::int32_t>(ops.component_count()); ++c) {
        const auto& m = ops.component_members(c);
        if (ops.match(selector, m)) selected.insert(selected.end(), m.begin(), m.end());
    }

    if (!selected.empty()) {
        std::vector<std::int8_t> is_selected(config.points.size(), 0);
        for (const std::int32_t i : selected) is_selected[static_cast<std::size_t>(i)] = 1;

        const double region_mass = static_cast<double>(selected.size()) * shape.volume();
        Rng rng = Rng::stream(seed, 0x1EADBEEF);
        double sum_d2 = 0.0, ss_d2 = 0.0, sum_neg = 0.0, ss_neg = 0.0;
        const bool torus = config.window.torus_like();
        Point lo, hi;
        config.window.bounds(lo, hi);

        for (std::int64_t j = 0; j < mc_points; ++j) {
            const std::int32_t y =
                selected[static_cast<std::size_t>(rng.below(selected.size()))];
            const Point offset = uniform_in_shape(rng, shape);
            Point x = config.points[static_cast<std::size_t>(y)];
            for (int a = 0; a < config.dim; ++a) {
                x[a] += offset[a];
                if (torus) {
                    const double L = hi[a] - lo[a];
                    while (x[a] < lo[a]) x[a] += L;
                    while (x[a] >= hi[a]) x[a] -= L;
                }
            }
            double v_d2 = 0.0, v_neg = 0.0;
            if (config.window.contains(x)) {
                // multiplicity of x in the union of selected translates
                std::int64_t mult = 0;
                ops.grid().for_candidates(x, [&](std::int32_t cand) {
                    if (!is_selected[static_cast<std::size_t>(cand)]) return;
                    const Point diff = ops.grid().wrapped_diff(
                        x, config.points[static_cast<std::size_t>(cand)]);
                    if (shape.contains(diff)) ++mult;
                });
                if (mult > 0) {
                    const std::int64_t d = ops.add_one_cost(selector, x);
                    if (d < 0) {
                        const double weight =
                            model.intensity_at(x, config.dim) * region_mass /
                            static_cast<double>(mult);
                        v_d2 = static_cast<double>(d) * static_cast<double>(d) * weight;
                        v_neg = weight;
                    }
                }
            }
            sum_d2 += v_d2;
            ss_d2 += v_d2 * v_d2;
            sum_neg += v_neg;
            ss_neg += v_neg * v_neg;
        }
        const double nn = static_cast<double>(mc_points);
        rec.integral_estimate = sum_d2 / nn;
        rec.integral_se =
            std::sqrt(std::max(0.0, ss_d2 / nn - sq(rec.integral_estimate)) / nn);
        rec.neg_measure_estimate = sum_neg / nn;
        rec.neg_measure_se =
            std::sqrt(std::max(0.0, ss_neg / nn - sq(rec.neg_measure_estimate)) / nn);
    }

    const double af = rec.a * static_cast<double>(rec.f);
    rec.satisfied = rec.sum_term + rec.integral_estimate - 4.0 * rec.integral_se <= af;
    rec.neg_measure_leq_ksf =
        rec.neg_measure_estimate - 4.0 * rec.neg_measure_se <=
        selector.k * sigma.value * static_cast<double>(rec.f);
    return rec;
}

} // namespace geomconc
