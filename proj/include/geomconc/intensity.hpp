#ifndef GEOMCONC_INTENSITY_HPP
#define GEOMCONC_INTENSITY_HPP

// Intensity measures, simulation windows and Poisson sampling. The measure
// is scale * m(x) dx where m is one of: a constant rate, the radial power
// law alpha*(||x||+1)^{-gamma}, or a user density bounded by sup_bound.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geomconc/common.hpp"
#include "geomconc/rng.hpp"
#include "geomconc/shape.hpp"

namespace geomconc {

enum class WindowKind { box, ball, torus_box };

struct Window {
    WindowKind kind = WindowKind::box;
    int dim = 2;
    Point center{0.0, 0.0, 0.0};
    Point half_extent{1.0, 1.0, 1.0}; // per axis; for ball, [0] is the radius

    static Window box(int dim, const Point& half_extent, const Point& center = {});
    static Window torus(int dim, const Point& half_extent, const Point& center = {});
    static Window ball(int dim, double radius, const Point& center = {});

    bool torus_like() const { return kind == WindowKind::torus_box; }
    double radius() const { return half_extent[0]; }
    double volume() const;
    bool contains(const Point& p) const;
    // a - b, wrapped to the nearest representative on torus windows
    Point diff(const Point& a, const Point& b) const;
    // membership in the window shrunk by `margin` on all sides
    bool contains_eroded(const Point& p, double margin) const;
    // axis-aligned bounding box [lo, hi]
    void bounds(Point& lo, Point& hi) const;
    // largest distance from the origin to a point of the window
    double max_norm_to_origin() const;
    void validate() const;
};

enum class ModelKind { homogeneous, radial_power, custom };

struct IntensityModel {
    ModelKind kind = ModelKind::homogeneous;
    double scale = 1.0;  // the "t" multiplying the whole measure

    double rate = 1.0;                    // homogeneous
    double alpha = 1.0, gamma = 1.0;      // radial power law
    std::function<double(const Point&, int)> density; // custom
    double sup_bound = 0.0;                           // custom
    std::optional<std::pair<Point, Point>> sigma_search_box; // custom
    // custom models: declared integral of m^k for the k in use
    std::optional<double> mk_integral_declared;

    static IntensityModel homogeneous(double rate, double scale = 1.0);
    static IntensityModel radial_power(double alpha, double gamma, double scale = 1.0);
    static IntensityModel custom(std::function<double(const Point&, int)> density,
                                 double sup_bound, double scale = 1.0);

    // unscaled density m(x)
    double density_at(const Point& p, int dim) const;
    // scale * m(x)
    double intensity_at(const Point& p, int dim) const { return scale * density_at(p, dim); }
    double sup_density() const;
    // scale * integral of m over the window (quadrature for radial/custom)
    double mass(const Window& w) const;
    void validate() const;
};

struct PointConfig {
    int dim = 2;
    std::vector<Point> points;
    Window window;
    std::uint64_t master_seed = 0;
    std::uint64_t replication = 0;

    std::size_t size() const { return points.size(); }
};

// Builds a config from explicit points, enforcing the type invariants
// (all points inside the window, pairwise distinct).
PointConfig make_config(int dim, std::vector<Point> points, const Window& window);

// Poisson sample of the measure restricted to the window, by thinning a
// dominating piecewise-constant process. Deterministic in (seed, replication).
PointConfig sample_poisson(const IntensityModel& model, const Window& window,
                           std::uint64_t seed, std::uint64_t replication = 0);

struct SigmaResult {
    double value = 0.0;
    double grid_pitch = 0.0; // > 0 when obtained by grid search (custom models)
    bool exact = false;      // true for the closed-form homogeneous case
};

// sigma_S^mu = sup_x mu(S + x), including the scale factor.
SigmaResult sigma_s(const IntensityModel& model, const Shape& shape);

enum class IntegrabilityVerdict { integrable, unknown, not_integrable, integrable_on_window };

struct IntegrabilityReport {
    bool sigma_finite = true;
    bool mk_integrable = false;
    IntegrabilityVerdict verdict = IntegrabilityVerdict::unknown;
};

// Sufficient-criterion diagnostic: radial power integrates m^k iff gamma*k > d.
IntegrabilityReport validate_integrability(const IntensityModel& model, int k,
                                           const Shape& shape);

// Closed-form int m(x)^k dx over R^d for the radial power law (gamma*k > d).
double radial_power_mk_integral(const IntensityModel& model, int k, int dim);
// Closed-form tail int_{||x||>R} m(x)^k dx; reports window truncation bias.
double radial_power_mk_tail(const IntensityModel& model, int k, int dim, double R);

const char* to_string(IntegrabilityVerdict v);

} // namespace geomconc

#endif
