#ifndef GEOMCONC_ASYMPTOTICS_HPP
#define GEOMCONC_ASYMPTOTICS_HPP

// Regime limit constants for component counts under the scaling (t mu,
// rho_t S): the sparse, thermodynamic and dense constants evaluated by
// deterministic/Monte Carlo integration, the exact expectation integral on
// a window, and the regime-scaling / strong-law experiment drivers.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "geomconc/components.hpp"

namespace geomconc {

enum class Regime { sparse, thermodynamic, dense };

struct RegimeSpec {
    std::vector<double> t_grid;              // increasing
    std::function<double(double)> rho_rule;  // t -> rho_t
    Regime classified = Regime::sparse;
    double c = 0.0;        // limit of t rho_t^d (thermodynamic)
    std::string rho_desc;  // echoed into reports

    // Checks rho positivity and that the numeric limit of t*rho_t^d over the
    // grid matches the classification (1e-6 relative drift for thermodynamic).
    void validate(int dim) const;
};

struct ValueWithError {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t evals = 0;
};

struct RegimeRow {
    double t = 0.0;
    double rho = 0.0;
    double t_rho_d = 0.0;
    double mean_f_raw = 0.0;
    double mean_f_eroded = 0.0;
    double mean_f_se = 0.0;
    double mean_u = 0.0;          // sparse mode only
    double scaled = 0.0;          // regime-appropriate scaling of mean_f
    double ratio_to_limit = 0.0;  // scaled / limit constant
    double kfact_f_over_u = 0.0;  // sparse mode only
    double bracket_lo = 0.0;      // exp(-t rho^d k vol(S) ||m||_inf)
    double window_half_extent = 0.0;
    double window_tail_bias = 0.0; // m^k mass fraction outside the window
    std::int64_t replications = 0;
};

struct AsymptoticsReport {
    std::string constant_name; // "s", "t" or "d"
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t integrand_eval_count = 0;
    std::vector<RegimeRow> table; // filled by regime experiments
};

// E F_S^A on a window by the exact expectation integral (Monte Carlo over
// mu-restricted-to-window samples; the void probability uses exact union
// volumes where available, nested MC otherwise). Fixed-size selector, k <= 4.
ValueWithError expected_count_exact(const IntensityModel& model, const Shape& shape,
                                    const Selector& selector, const Window& window,
                                    std::int64_t mc_points, std::uint64_t seed);

// Sparse constant: (1/k!) * int m^k dx * int I(x) dx over (R^d)^{k-1}.
// Shape at unit scale (rho = 1). Requires gamma*k > d for radial power.
AsymptoticsReport sparse_constant(const Shape& shape, const Selector& selector,
                                  const IntensityModel& model,
                                  std::int64_t mc_points = 400000,
                                  std::uint64_t seed = 1);

// Thermodynamic constant for t rho_t^d -> c.
AsymptoticsReport thermo_constant(const Shape& shape, const Selector& selector,
                                  const IntensityModel& model, double c,
                                  std::int64_t mc_points = 400000,
                                  std::uint64_t seed = 1);

// Dense constant; the model must be exactly the radial power law.
AsymptoticsReport dense_constant(const Shape& shape, const Selector& selector,
                                 const IntensityModel& model,
                                 std::int64_t mc_points = 400000,
                                 std::uint64_t seed = 1);

struct ExperimentOptions {
    std::int64_t replications = 64;  // per grid point
    int threads = 0;
    double window_tail_fraction = 1e-3; // truncation-bias budget
    double base_half_extent = 10.0;     // R0; also the torus half extent
    std::int64_t constant_mc_points = 400000;
};

// Per-t table of simulation estimates against the regime constant.
// Homogeneous models run on a torus; radial models on a box sized so the
// m^k tail mass outside is below the budget, with eroded component counts.
AsymptoticsReport regime_experiment(const RegimeSpec& regime, const Shape& shape,
                                    const Selector& selector, const IntensityModel& model,
                                    const ExperimentOptions& opts, std::uint64_t master_seed);

struct StrongLawRow {
    double t = 0.0;
    double rho = 0.0;
    double scaled = 0.0;        // single-realization scaled value
    double deviation = 0.0;     // |scaled - limit|
    double tail_max_dev = 0.0;  // max deviation from this t to the end
};

struct StrongLawReport {
    double limit = 0.0;
    bool growth_condition_ok = true;
    std::string growth_note;
    std::vector<StrongLawRow> rows;
};

// One independent realization per t; emits scaled values and the running
// max deviation over the tail of the grid. Warns (but still runs) when the
// growth condition fails numerically.
StrongLawReport strong_law_experiment(const RegimeSpec& regime, const Shape& shape,
                                      const Selector& selector, const IntensityModel& model,
                                      const ExperimentOptions& opts, std::uint64_t master_seed);

// Window for a scaled experiment step (shared with the runner, exposed for
// tests): torus for homogeneous models, origin-centered box otherwise.
Window experiment_window(const IntensityModel& model, const Shape& unit_shape,
                         const Selector& selector, double t, double rho_t,
                         Regime regime, const ExperimentOptions& opts);

} // namespace geomconc

#endif
