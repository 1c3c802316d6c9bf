#ifndef GEOMCONC_CONCENTRATION_HPP
#define GEOMCONC_CONCENTRATION_HPP

// Concentration bounds with their explicit constants, the analytic
// functions psi and phi behind the entropy method, empirical tail
// estimation by Monte Carlo replication, and the self-bounding condition
// checker.

#include <cstdint>
#include <string>
#include <vector>

#include "geomconc/components.hpp"

namespace geomconc {

// psi(z) = z e^z - e^z + 1, phi(z) = e^z - z - 1; series near 0 to avoid
// cancellation.
double psi(double z);
double phi(double z);

// The ratio bound (a psi(z)/z^2) / (1 + a psi(z)/z) <= max(a, 4/3)/2, a, z > 0.
bool psi_ratio_bound_check(double a, double z);
// Intermediate inequality psi(z)(1 - 2z/3) <= z^2/2 for z > 0.
bool psi_bound_check(double z);

struct LemmaSweepResult {
    std::int64_t points = 0;
    std::int64_t lemma_violations = 0;
    std::int64_t psi_bound_violations = 0;
    double max_lemma_slack = 0.0; // max of lhs - rhs observed
};

// Quasi-random sweep over a in (0, a_max], z in (0, z_max].
LemmaSweepResult lemma_sweep(std::int64_t points, double a_max = 10.0,
                             double z_max = 50.0);

struct BoundParams {
    int k = 1;
    int c_s = 1;
    double sigma = 0.0;   // sigma_S^mu
    double mean_f = 0.0;  // EF, from theory or pilot MC
    std::string mean_source = "plug-in";
    bool cs_certified = true;

    double a() const { return k * (double(c_s) * c_s * sigma + 1.0); }
};

double upper_tail_bound(double r, const BoundParams& p);
double lower_tail_bound(double r, const BoundParams& p);

struct WilsonInterval {
    double lo = 0.0, hi = 1.0;
};
// 99% score interval for a binomial proportion (z = 2.5758...).
WilsonInterval wilson99(std::int64_t successes, std::int64_t n);

struct TailReport {
    std::vector<double> r_grid;
    std::vector<double> upper_bound, lower_bound;
    std::vector<double> upper_emp, lower_emp;
    std::vector<double> upper_lo, upper_hi, lower_lo, lower_hi;
    std::int64_t n_replications = 0;
    std::uint64_t master_seed = 0;
    BoundParams params;
    double mean_f = 0.0;
    double mean_f_se = 0.0;
    double var_f = 0.0;
    double var_bound = 0.0; // 2 v2 + 4 v1 + 8 w^2
    bool cs_certified = true;
    std::vector<std::int64_t> f_values; // per replication, in replication order
};

// Independent replications (sample -> graph -> count); empirical tail
// frequencies of {F >= mean + r} and {F <= mean - r} with 99% Wilson
// intervals against the theoretical bounds. Deterministic in master_seed
// regardless of thread count.
TailReport empirical_tails(const IntensityModel& model, const Window& window,
                           const Shape& shape, const Selector& selector,
                           const std::vector<double>& r_grid,
                           std::int64_t n_replications, std::uint64_t master_seed,
                           int threads = 0);

// Same, with the r grid derived from the plug-in mean: `count` evenly
// spaced points from 0 to sqrt_mean_mult * sqrt(mean F).
TailReport empirical_tails_auto(const IntensityModel& model, const Window& window,
                                const Shape& shape, const Selector& selector,
                                int count, double sqrt_mean_mult,
                                std::int64_t n_replications, std::uint64_t master_seed,
                                int threads = 0);

struct ConditionRecord {
    std::int64_t f = 0;
    double a = 0.0;
    double sum_term = 0.0;           // exact: sum over vertices of (D_x F(eta - x))_+^2
    double integral_estimate = 0.0;  // MC: int (D_x F(eta))_-^2 dmu
    double integral_se = 0.0;
    double neg_measure_estimate = 0.0; // MC: mu{x : D_x F < 0}
    double neg_measure_se = 0.0;
    bool sum_leq_kf = false;            // exact intermediate bound
    bool neg_measure_leq_ksf = false;   // statistical intermediate bound (4 se)
    bool satisfied = false;             // sum + integral - 4 se <= a F
    bool cs_certified = true;
};

// Verifies the self-bounding condition on one configuration. The integral
// term is sampled only over union(S+y) for vertices y of selector-matching
// components; the integrand vanishes outside that region.
ConditionRecord condition_check(const PointConfig& config, const Shape& shape,
                                const Selector& selector, const IntensityModel& model,
                                std::int64_t mc_points, std::uint64_t seed);

} // namespace geomconc

#endif
