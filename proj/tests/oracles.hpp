#ifndef GEOMCONC_TEST_ORACLES_HPP
#define GEOMCONC_TEST_ORACLES_HPP

// Independent oracles used by the tests: brute-force graph construction,
// BFS component labeling, and random configuration generators. These stay
// deliberately naive and separate from the library implementations.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "geomconc/components.hpp"
#include "geomconc/geometry.hpp"
#include "geomconc/intensity.hpp"
#include "geomconc/rng.hpp"

namespace oracle {

using namespace geomconc;

inline Point brute_diff(const Window& w, const Point& a, const Point& b) {
    Point d{0, 0, 0};
    for (int i = 0; i < w.dim; ++i) {
        double v = a[i] - b[i];
        if (w.torus_like()) {
            const double L = 2.0 * w.half_extent[i];
            if (v > 0.5 * L) v -= L;
            else if (v < -0.5 * L) v += L;
        }
        d[i] = v;
    }
    return d;
}

// O(n^2) adjacency by the pairwise rule
inline std::vector<std::vector<std::int32_t>> brute_adjacency(const PointConfig& cfg,
                                                              const Shape& shape) {
    const std::int32_t n = static_cast<std::int32_t>(cfg.points.size());
    std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(n));
    for (std::int32_t i = 0; i < n; ++i)
        for (std::int32_t j = i + 1; j < n; ++j) {
            const Point d = brute_diff(cfg.window, cfg.points[static_cast<std::size_t>(i)],
                                       cfg.points[static_cast<std::size_t>(j)]);
            if (shape.contains(d)) {
                adj[static_cast<std::size_t>(i)].push_back(j);
                adj[static_cast<std::size_t>(j)].push_back(i);
            }
        }
    for (auto& v : adj) std::sort(v.begin(), v.end());
    return adj;
}

// BFS partition over an adjacency list; labels are first-visit ordered
inline std::vector<std::int32_t> bfs_components(
    const std::vector<std::vector<std::int32_t>>& adj) {
    const std::int32_t n = static_cast<std::int32_t>(adj.size());
    std::vector<std::int32_t> comp(static_cast<std::size_t>(n), -1);
    std::int32_t next = 0;
    std::vector<std::int32_t> queue;
    for (std::int32_t s = 0; s < n; ++s) {
        if (comp[static_cast<std::size_t>(s)] >= 0) continue;
        comp[static_cast<std::size_t>(s)] = next;
        queue.assign(1, s);
        while (!queue.empty()) {
            const std::int32_t u = queue.back();
            queue.pop_back();
            for (const std::int32_t v : adj[static_cast<std::size_t>(u)]) {
                if (comp[static_cast<std::size_t>(v)] < 0) {
                    comp[static_cast<std::size_t>(v)] = next;
                    queue.push_back(v);
                }
            }
        }
        ++next;
    }
    return comp;
}

inline std::map<int, std::int64_t> component_size_histogram(
    const std::vector<std::int32_t>& comp) {
    std::map<std::int32_t, std::int64_t> sizes;
    for (const std::int32_t c : comp) ++sizes[c];
    std::map<int, std::int64_t> hist;
    for (const auto& [c, s] : sizes) ++hist[static_cast<int>(s)];
    return hist;
}

// F computed from scratch on explicit points (full rebuild oracle)
inline std::int64_t count_f_rebuild(const std::vector<Point>& points, const Window& window,
                                    const Shape& shape, const Selector& selector) {
    PointConfig cfg;
    cfg.dim = window.dim;
    cfg.window = window;
    cfg.points = points;
    const GeomGraph g = build_graph(cfg, shape);
    return count_f(g, selector);
}

inline PointConfig random_config(Rng& rng, int dim, int max_points, const Window& window,
                                 double /*spread*/ = 1.0) {
    Point lo, hi;
    window.bounds(lo, hi);
    const int n = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_points + 1)));
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (;;) {
            Point p{0, 0, 0};
            for (int a = 0; a < dim; ++a) p[a] = rng.uniform(lo[a], hi[a]);
            if (window.contains(p)) {
                pts.push_back(p);
                break;
            }
        }
    }
    PointConfig cfg;
    cfg.dim = dim;
    cfg.window = window;
    cfg.points = std::move(pts);
    return cfg;
}

// small connected graphs used as iso targets
inline std::vector<std::vector<int>> path_graph(int k) {
    std::vector<std::vector<int>> a(static_cast<std::size_t>(k),
                                    std::vector<int>(static_cast<std::size_t>(k), 0));
    for (int i = 0; i + 1 < k; ++i)
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + 1)] =
            a[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(i)] = 1;
    return a;
}

inline std::vector<std::vector<int>> complete_graph(int k) {
    std::vector<std::vector<int>> a(static_cast<std::size_t>(k),
                                    std::vector<int>(static_cast<std::size_t>(k), 0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
    return a;
}

inline std::vector<std::vector<int>> star_graph(int k) {
    std::vector<std::vector<int>> a(static_cast<std::size_t>(k),
                                    std::vector<int>(static_cast<std::size_t>(k), 0));
    for (int i = 1; i < k; ++i)
        a[0][static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)][0] = 1;
    return a;
}

} // namespace oracle

#endif
