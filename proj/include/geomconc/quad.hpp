#ifndef GEOMCONC_QUAD_HPP
#define GEOMCONC_QUAD_HPP

// Small deterministic quadrature toolkit: Gauss-Legendre panels plus the
// radial helpers used for norm balls and power-law densities.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace geomconc::quad {

struct GaussRule {
    std::vector<double> nodes;   // on (-1, 1)
    std::vector<double> weights;
};

// Nodes via Newton iteration on Legendre polynomials; cached per order.
inline const GaussRule& gauss_legendre(int n) {
    static thread_local int cached_n = 0;
    static thread_local GaussRule rule;
    if (cached_n == n) return rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    cached_n = n;
    return rule;
}

template <class Fn>
double integrate(Fn&& f, double a, double b, int panels = 8, int order = 32) {
    if (!(b > a)) return 0.0;
    const GaussRule& g = gauss_legendre(order);
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double acc = 0.0;
        for (int i = 0; i < order; ++i)
            acc += g.weights[i] * f(mid + 0.5 * h * g.nodes[i]);
        sum += acc * 0.5 * h;
    }
    return sum;
}

// 2-D tensor rule over an axis-aligned box.
template <class Fn>
double integrate_box2(Fn&& f, double ax, double bx, double ay, double by,
                      int panels = 8, int order = 32) {
    return integrate(
        [&](double x) {
            return integrate([&](double y) { return f(x, y); }, ay, by, panels, order);
        },
        ax, bx, panels, order);
}

inline double sphere_surface(int d) {
    switch (d) {
        case 1: return 2.0;
        case 2: return 2.0 * M_PI;
        case 3: return 4.0 * M_PI;
        default: throw std::invalid_argument("dimension must be 1, 2 or 3");
    }
}

inline double ball_volume(int d, double radius) {
    switch (d) {
        case 1: return 2.0 * radius;
        case 2: return M_PI * radius * radius;
        case 3: return (4.0 / 3.0) * M_PI * radius * radius * radius;
        default: throw std::invalid_argument("dimension must be 1, 2 or 3");
    }
}

// integral over ||x|| in [a,b] of f(r) dx = surface(d) * int f(r) r^{d-1} dr
template <class Fn>
double integrate_radial(Fn&& f, int d, double a, double b, int panels = 16,
                        int order = 32) {
    return sphere_surface(d) *
           integrate([&](double r) { return f(r) * std::pow(r, d - 1); }, a, b,
                     panels, order);
}

template <class Fn>
double bisect(Fn&& f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace geomconc::quad

#endif
