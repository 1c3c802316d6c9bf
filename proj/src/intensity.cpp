#include "geomconc/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geomconc/quad.hpp"

namespace geomconc {

// ---------------------------------------------------------------------------
// Window

Window Window::box(int dim, const Point& half_extent, const Point& center) {
    Window w;
    w.kind = WindowKind::box;
    w.dim = dim;
    w.center = center;
    w.half_extent = half_extent;
    w.validate();
    return w;
}

Window Window::torus(int dim, const Point& half_extent, const Point& center) {
    Window w = box(dim, half_extent, center);
    w.kind = WindowKind::torus_box;
    return w;
}

Window Window::ball(int dim, double radius, const Point& center) {
    Window w;
    w.kind = WindowKind::ball;
    w.dim = dim;
    w.center = center;
    w.half_extent = Point{radius, radius, radius};
    w.validate();
    return w;
}

void Window::validate() const {
    require(dim >= 1 && dim <= kMaxDim, "window.dimension must be 1, 2 or 3");
    if (kind == WindowKind::ball) {
        require(half_extent[0] > 0.0, "window.radius must be > 0");
    } else {
        for (int i = 0; i < dim; ++i)
            require(half_extent[i] > 0.0, "window.half_extent must be > 0 in every axis");
    }
}

double Window::volume() const {
    if (kind == WindowKind::ball) return quad::ball_volume(dim, half_extent[0]);
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= 2.0 * half_extent[i];
    return v;
}

bool Window::contains(const Point& p) const {
    if (kind == WindowKind::ball) {
        double s2 = 0.0;
        for (int i = 0; i < dim; ++i) s2 += sq(p[i] - center[i]);
        return s2 <= sq(half_extent[0]);
    }
    for (int i = 0; i < dim; ++i)
        if (std::fabs(p[i] - center[i]) > half_extent[i]) return false;
    return true;
}

Point Window::diff(const Point& a, const Point& b) const {
    Point d{0, 0, 0};
    for (int i = 0; i < dim; ++i) {
        double v = a[i] - b[i];
        if (kind == WindowKind::torus_box) {
            const double L = 2.0 * half_extent[i];
            if (v > 0.5 * L) v -= L;
            else if (v < -0.5 * L) v += L;
        }
        d[i] = v;
    }
    return d;
}

bool Window::contains_eroded(const Point& p, double margin) const {
    if (kind == WindowKind::torus_box) return contains(p); // no boundary
    if (kind == WindowKind::ball) {
        const double r = half_extent[0] - margin;
        if (r <= 0.0) return false;
        double s2 = 0.0;
        for (int i = 0; i < dim; ++i) s2 += sq(p[i] - center[i]);
        return s2 <= sq(r);
    }
    for (int i = 0; i < dim; ++i) {
        const double h = half_extent[i] - margin;
        if (h <= 0.0 || std::fabs(p[i] - center[i]) > h) return false;
    }
    return true;
}

void Window::bounds(Point& lo, Point& hi) const {
    lo = Point{0, 0, 0};
    hi = Point{0, 0, 0};
    for (int i = 0; i < dim; ++i) {
        const double h = kind == WindowKind::ball ? half_extent[0] : half_extent[i];
        lo[i] = center[i] - h;
        hi[i] = center[i] + h;
    }
}

double Window::max_norm_to_origin() const {
    Point lo, hi;
    bounds(lo, hi);
    double s2 = 0.0;
    for (int i = 0; i < dim; ++i) s2 += sq(std::max(std::fabs(lo[i]), std::fabs(hi[i])));
    return std::sqrt(s2);
}

// ---------------------------------------------------------------------------
// IntensityModel

IntensityModel IntensityModel::homogeneous(double rate, double scale) {
    IntensityModel m;
    m.kind = ModelKind::homogeneous;
    m.rate = rate;
    m.scale = scale;
    m.validate();
    return m;
}

IntensityModel IntensityModel::radial_power(double alpha, double gamma, double scale) {
    IntensityModel m;
    m.kind = ModelKind::radial_power;
    m.alpha = alpha;
    m.gamma = gamma;
    m.scale = scale;
    m.validate();
    return m;
}

IntensityModel IntensityModel::custom(std::function<double(const Point&, int)> density,
                                      double sup_bound, double scale) {
    IntensityModel m;
    m.kind = ModelKind::custom;
    m.density = std::move(density);
    m.sup_bound = sup_bound;
    m.scale = scale;
    m.validate();
    return m;
}

void IntensityModel::validate() const {
    require(scale > 0.0, "model.scale must be > 0");
    switch (kind) {
        case ModelKind::homogeneous:
            require(rate >= 0.0, "model.rate must be >= 0");
            break;
        case ModelKind::radial_power:
            require(alpha > 0.0, "model.alpha must be > 0");
            require(gamma > 0.0, "model.gamma must be > 0");
            break;
        case ModelKind::custom:
            require(static_cast<bool>(density), "custom model needs a density");
            require(sup_bound > 0.0, "model.sup_bound must be > 0");
            break;
    }
}

double IntensityModel::density_at(const Point& p, int dim) const {
    switch (kind) {
        case ModelKind::homogeneous:
            return rate;
        case ModelKind::radial_power: {
            double s2 = 0.0;
            for (int i = 0; i < dim; ++i) s2 += sq(p[i]);
            return alpha * std::pow(std::sqrt(s2) + 1.0, -gamma);
        }
        case ModelKind::custom:
            return density(p, dim);
    }
    return 0.0;
}

double IntensityModel::sup_density() const {
    switch (kind) {
        case ModelKind::homogeneous: return rate;
        case ModelKind::radial_power: return alpha;
        case ModelKind::custom: return sup_bound;
    }
    return 0.0;
}

namespace {

// Integral of the (unscaled) density over the window; density assumed
// smooth. Boxes use tensor Gauss-Legendre, balls polar coordinates around
// the window center.
double integrate_density_over_window(const IntensityModel& model, const Window& w) {
    const int d = w.dim;
    auto m = [&](const Point& p) { return model.density_at(p, d); };
    if (w.kind == WindowKind::ball && d >= 2) {
        const double R = w.half_extent[0];
        if (d == 2) {
            return quad::integrate(
                [&](double th) {
                    return quad::integrate(
                        [&](double r) {
                            Point p{w.center[0] + r * std::cos(th),
                                    w.center[1] + r * std::sin(th), 0.0};
                            return m(p) * r;
                        },
                        0.0, R, 16, 32);
                },
                0.0, 2.0 * M_PI, 8, 32);
        }
        // d == 3: spherical about the center
        return quad::integrate(
            [&](double th) {
                return quad::integrate(
                    [&](double ph) {
                        return quad::integrate(
                            [&](double r) {
                                Point p{w.center[0] + r * std::sin(ph) * std::cos(th),
                                        w.center[1] + r * std::sin(ph) * std::sin(th),
                                        w.center[2] + r * std::cos(ph)};
                                return m(p) * r * r * std::sin(ph);
                            },
                            0.0, R, 8, 24);
                    },
                    0.0, M_PI, 4, 24);
            },
            0.0, 2.0 * M_PI, 4, 24);
    }
    Point lo, hi;
    w.bounds(lo, hi);
    if (d == 1) {
        return quad::integrate([&](double x) { return m(Point{x, 0, 0}); }, lo[0], hi[0],
                               16, 32);
    }
    if (d == 2) {
        return quad::integrate_box2(
            [&](double x, double y) { return m(Point{x, y, 0}); }, lo[0], hi[0], lo[1],
            hi[1], 12, 32);
    }
    return quad::integrate(
        [&](double x) {
            return quad::integrate_box2(
                [&](double y, double z) { return m(Point{x, y, z}); }, lo[1], hi[1],
                lo[2], hi[2], 6, 24);
        },
        lo[0], hi[0], 6, 24);
}

} // namespace

double IntensityModel::mass(const Window& w) const {
    if (kind == ModelKind::homogeneous) return scale * rate * w.volume();
    return scale * integrate_density_over_window(*this, w);
}

// ---------------------------------------------------------------------------
// PointConfig construction and sampling

PointConfig make_config(int dim, std::vector<Point> points, const Window& window) {
    window.validate();
    require(dim == window.dim, "config dimension must match window dimension");
    for (const Point& p : points)
        require(window.contains(p), "all points must lie in the window");
    std::vector<Point> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        require(sorted[i] != sorted[i - 1], "points must be pairwise distinct");
    PointConfig cfg;
    cfg.dim = dim;
    cfg.points = std::move(points);
    cfg.window = window;
    return cfg;
}

namespace {

void check_window_model(const IntensityModel& model, const Window& window) {
    window.validate();
    model.validate();
    if (window.kind == WindowKind::torus_box)
        require(model.kind == ModelKind::homogeneous,
                "torus windows require a homogeneous intensity model");
}

Point uniform_in_window(Rng& rng, const Window& w) {
    Point lo, hi;
    w.bounds(lo, hi);
    for (;;) {
        Point p{0, 0, 0};
        for (int i = 0; i < w.dim; ++i) p[i] = rng.uniform(lo[i], hi[i]);
        if (w.contains(p)) return p;
    }
}

Point uniform_direction(Rng& rng, int d) {
    if (d == 1) return Point{rng.u01() < 0.5 ? -1.0 : 1.0, 0, 0};
    if (d == 2) {
        const double th = rng.uniform(0.0, 2.0 * M_PI);
        return Point{std::cos(th), std::sin(th), 0};
    }
    for (;;) {
        const double u = rng.uniform(-1.0, 1.0), v = rng.uniform(-1.0, 1.0);
        const double s = u * u + v * v;
        if (s >= 1.0 || s == 0.0) continue;
        const double f = 2.0 * std::sqrt(1.0 - s);
        return Point{u * f, v * f, 1.0 - 2.0 * s};
    }
}

// radius uniform w.r.t. volume on the annulus [r0, r1]
double annulus_radius(Rng& rng, int d, double r0, double r1) {
    const double u = rng.u01();
    if (d == 1) return r0 + u * (r1 - r0);
    if (d == 2) return std::sqrt(r0 * r0 + u * (r1 * r1 - r0 * r0));
    const double c0 = r0 * r0 * r0, c1 = r1 * r1 * r1;
    return std::cbrt(c0 + u * (c1 - c0));
}

void sample_homogeneous(const IntensityModel& model, const Window& w, Rng& rng,
                        std::vector<Point>& out) {
    const double mean = model.scale * model.rate * w.volume();
    if (!std::isfinite(mean)) throw std::runtime_error("window mass not finite");
    const std::int64_t n = rng.poisson(mean);
    out.reserve(static_cast<std::size_t>(n));
    Point lo, hi;
    w.bounds(lo, hi);
    const bool is_box = w.kind != WindowKind::ball;
    for (std::int64_t i = 0; i < n; ++i) {
        if (is_box) {
            Point p{0, 0, 0};
            for (int a = 0; a < w.dim; ++a) p[a] = rng.uniform(lo[a], hi[a]);
            out.push_back(p);
        } else {
            out.push_back(uniform_in_window(rng, w));
        }
    }
}

// Thinning against a flat dominating process at level sup over the window.
void sample_flat_thinning(const IntensityModel& model, const Window& w, double sup,
                          Rng& rng, std::vector<Point>& out) {
    Point lo, hi;
    w.bounds(lo, hi);
    double bbox_vol = 1.0;
    for (int i = 0; i < w.dim; ++i) bbox_vol *= hi[i] - lo[i];
    const double mean = model.scale * sup * bbox_vol;
    if (!std::isfinite(mean)) throw std::runtime_error("window mass not finite");
    const std::int64_t n = rng.poisson(mean);
    for (std::int64_t i = 0; i < n; ++i) {
        Point p{0, 0, 0};
        for (int a = 0; a < w.dim; ++a) p[a] = rng.uniform(lo[a], hi[a]);
        const double u = rng.u01();
        if (!w.contains(p)) continue;
        const double m = model.density_at(p, w.dim);
        if (model.kind == ModelKind::custom && m > sup * (1.0 + 1e-9))
            throw std::runtime_error("custom density exceeds sup_bound");
        if (u * sup < m) out.push_back(p);
    }
}

// Thinning against a radially piecewise-constant dominating process; tight
// for the radial power law on large windows where a flat envelope would be
// mostly rejected. The envelope steps on origin-centered annuli.
void sample_radial_thinning(const IntensityModel& model, const Window& w, Rng& rng,
                            std::vector<Point>& out) {
    const int d = w.dim;
    const double r_max = w.max_norm_to_origin();

    std::vector<double> radii{0.0};
    while (radii.back() < r_max) {
        const double r = radii.back();
        radii.push_back(std::min(r_max, r + 0.1 * (1.0 + r)));
    }

    Point lo, hi;
    w.bounds(lo, hi);
    double bbox_vol = 1.0;
    for (int i = 0; i < d; ++i) bbox_vol *= hi[i] - lo[i];
    double flat_sup = 0.0;
    {
        // sup of m over the window: closest window point to the origin
        double c2 = 0.0;
        for (int i = 0; i < d; ++i) {
            const double lo_i = lo[i], hi_i = hi[i];
            double nearest = 0.0;
            if (lo_i > 0.0) nearest = lo_i;
            else if (hi_i < 0.0) nearest = hi_i;
            c2 += sq(nearest);
        }
        flat_sup = model.alpha * std::pow(std::sqrt(c2) + 1.0, -model.gamma);
    }

    double annuli_mass = 0.0;
    for (std::size_t j = 0; j + 1 < radii.size(); ++j) {
        const double env = model.alpha * std::pow(1.0 + radii[j], -model.gamma);
        annuli_mass += env * (quad::ball_volume(d, radii[j + 1]) - quad::ball_volume(d, radii[j]));
    }
    if (flat_sup * bbox_vol <= annuli_mass) {
        sample_flat_thinning(model, w, flat_sup, rng, out);
        return;
    }

    for (std::size_t j = 0; j + 1 < radii.size(); ++j) {
        const double env = model.alpha * std::pow(1.0 + radii[j], -model.gamma);
        const double ring_vol =
            quad::ball_volume(d, radii[j + 1]) - quad::ball_volume(d, radii[j]);
        const double mean = model.scale * env * ring_vol;
        if (!std::isfinite(mean)) throw std::runtime_error("window mass not finite");
        const std::int64_t n = rng.poisson(mean);
        for (std::int64_t i = 0; i < n; ++i) {
            const double r = annulus_radius(rng, d, radii[j], radii[j + 1]);
            const Point dir = uniform_direction(rng, d);
            Point p{0, 0, 0};
            for (int a = 0; a < d; ++a) p[a] = r * dir[a];
            const double u = rng.u01();
            if (!w.contains(p)) continue;
            if (u * env < model.density_at(p, d)) out.push_back(p);
        }
    }
}

} // namespace

PointConfig sample_poisson(const IntensityModel& model, const Window& window,
                           std::uint64_t seed, std::uint64_t replication) {
    check_window_model(model, window);
    Rng rng = Rng::stream(seed, replication);

    PointConfig cfg;
    cfg.dim = window.dim;
    cfg.window = window;
    cfg.master_seed = seed;
    cfg.replication = replication;

    switch (model.kind) {
        case ModelKind::homogeneous:
            sample_homogeneous(model, window, rng, cfg.points);
            break;
        case ModelKind::radial_power:
            sample_radial_thinning(model, window, rng, cfg.points);
            break;
        case ModelKind::custom:
            sample_flat_thinning(model, window, model.sup_bound, rng, cfg.points);
            break;
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// sigma_S^mu

namespace {

// mu(S + center) by smooth quadrature: polar/spherical about the translate
// center for Euclidean shapes, tensor rule for sup-norm boxes.
double measure_of_translate(const IntensityModel& model, const Shape& shape,
                            const Point& center) {
    const int d = shape.dim;
    if (shape.norm == Norm::sup || d == 1) {
        Window box = Window::box(d,
                                 Point{shape.rho, shape.rho, shape.rho}, center);
        return model.scale * integrate_density_over_window(model, box);
    }
    Window ball = Window::ball(d, shape.rho, center);
    return model.scale * integrate_density_over_window(model, ball);
}

} // namespace

SigmaResult sigma_s(const IntensityModel& model, const Shape& shape) {
    model.validate();
    SigmaResult res;
    switch (model.kind) {
        case ModelKind::homogeneous:
            res.value = model.scale * model.rate * shape.volume();
            res.exact = true;
            return res;
        case ModelKind::radial_power:
            // radially nonincreasing density: the sup is attained at x = 0
            res.value = measure_of_translate(model, shape, Point{0, 0, 0});
            return res;
        case ModelKind::custom: {
            if (!model.sigma_search_box)
                throw validation_error("sigma search region required");
            const auto& [lo, hi] = *model.sigma_search_box;
            const int per_axis = 33;
            double pitch = 0.0;
            for (int i = 0; i < shape.dim; ++i)
                pitch = std::max(pitch, (hi[i] - lo[i]) / (per_axis - 1));
            double best = 0.0;
            std::vector<int> idx(static_cast<std::size_t>(shape.dim), 0);
            for (;;) {
                Point c{0, 0, 0};
                for (int i = 0; i < shape.dim; ++i) {
                    c[i] = lo[i] + (hi[i] - lo[i]) * idx[static_cast<std::size_t>(i)] /
                                       (per_axis - 1);
                }
                best = std::max(best, measure_of_translate(model, shape, c));
                int axis = 0;
                while (axis < shape.dim && ++idx[static_cast<std::size_t>(axis)] == per_axis) {
                    idx[static_cast<std::size_t>(axis)] = 0;
                    ++axis;
                }
                if (axis == shape.dim) break;
            }
            res.value = best;
            res.grid_pitch = pitch;
            return res;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Integrability diagnostics

double radial_power_mk_integral(const IntensityModel& model, int k, int dim) {
    require(model.kind == ModelKind::radial_power, "radial power model required");
    const double n = model.gamma * k;
    require(n > dim, "gamma * k must exceed the dimension");
    double radial = 0.0;
    switch (dim) {
        case 1: radial = 1.0 / (n - 1.0); break;
        case 2: radial = 1.0 / (n - 2.0) - 1.0 / (n - 1.0); break;
        case 3: radial = 1.0 / (n - 3.0) - 2.0 / (n - 2.0) + 1.0 / (n - 1.0); break;
        default: throw validation_error("dimension must be 1, 2 or 3");
    }
    return std::pow(model.alpha, k) * quad::sphere_surface(dim) * radial;
}

double radial_power_mk_tail(const IntensityModel& model, int k, int dim, double R) {
    require(model.kind == ModelKind::radial_power, "radial power model required");
    require(R >= 0.0, "tail radius must be >= 0");
    const double n = model.gamma * k;
    require(n > dim, "gamma * k must exceed the dimension");
    const double u = 1.0 + R;
    double radial = 0.0;
    switch (dim) {
        case 1: radial = std::pow(u, 1.0 - n) / (n - 1.0); break;
        case 2:
            radial = std::pow(u, 2.0 - n) / (n - 2.0) - std::pow(u, 1.0 - n) / (n - 1.0);
            break;
        case 3:
            radial = std::pow(u, 3.0 - n) / (n - 3.0) -
                     2.0 * std::pow(u, 2.0 - n) / (n - 2.0) +
                     std::pow(u, 1.0 - n) / (n - 1.0);
            break;
        default: throw validation_error("dimension must be 1, 2 or 3");
    }
    return std::pow(model.alpha, k) * quad::sphere_surface(dim) * radial;
}

IntegrabilityReport validate_integrability(const IntensityModel& model, int k,
                                           const Shape& shape) {
    require(k >= 1, "k must be >= 1");
    model.validate();
    IntegrabilityReport rep;
    rep.sigma_finite = true; // all supported variants have bounded densities
    (void)shape;
    switch (model.kind) {
        case ModelKind::homogeneous:
            rep.mk_integrable = false; // constant density on all of R^d
            rep.verdict = IntegrabilityVerdict::integrable_on_window;
            break;
        case ModelKind::radial_power:
            rep.mk_integrable = model.gamma * k > shape.dim;
            rep.verdict = rep.mk_integrable ? IntegrabilityVerdict::integrable
                                            : IntegrabilityVerdict::unknown;
            break;
        case ModelKind::custom:
            rep.mk_integrable = model.mk_integral_declared.has_value();
            rep.verdict = rep.mk_integrable ? IntegrabilityVerdict::integrable
                                            : IntegrabilityVerdict::unknown;
            break;
    }
    return rep;
}

const char* to_string(IntegrabilityVerdict v) {
    switch (v) {
        case IntegrabilityVerdict::integrable: return "integrable";
        case IntegrabilityVerdict::unknown: return "unknown";
        case IntegrabilityVerdict::not_integrable: return "not-integrable";
        case IntegrabilityVerdict::integrable_on_window: return "integrable-on-window";
    }
    return "unknown";
}

} // namespace geomconc
