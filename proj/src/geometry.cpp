#include "geomconc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "geomconc/rng.hpp"

namespace geomconc {

// ---------------------------------------------------------------------------
// NeighborGrid

NeighborGrid::NeighborGrid(const std::vector<Point>& points, int dim, double cell_size,
                           const Window& window)
    : points_(&points), dim_(dim), torus_(window.torus_like()) {
    require(cell_size > 0.0, "grid cell size must be > 0");
    Point lo, hi;
    window.bounds(lo, hi);
    for (int a = 0; a < dim_; ++a) {
        const double len = hi[a] - lo[a];
        origin_[a] = lo[a];
        if (torus_) {
            ncells_[a] = std::max<std::int64_t>(1, static_cast<std::int64_t>(len / cell_size));
            cell_[a] = len / double(ncells_[a]);
            wrap_len_[a] = len;
        } else {
            ncells_[a] = std::max<std::int64_t>(
                1, static_cast<std::int64_t>(std::ceil(len / cell_size)));
            cell_[a] = cell_size;
        }
    }
    const std::size_t n = points.size();
    cell_of_.resize(n);
    order_.resize(n);
    std::vector<std::int64_t> raw(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t idx[kMaxDim] = {0, 0, 0};
        for (int a = 0; a < dim_; ++a) idx[a] = cell_index_axis(points[i][a], a);
        raw[i] = cell_id_from_idx(idx);
        order_[i] = static_cast<std::int32_t>(i);
    }
    std::stable_sort(order_.begin(), order_.end(), [&](std::int32_t a, std::int32_t b) {
        return raw[static_cast<std::size_t>(a)] < raw[static_cast<std::size_t>(b)];
    });
    for (std::size_t i = 0; i < n; ++i)
        cell_of_[i] = raw[static_cast<std::size_t>(order_[i])];
}

std::int64_t NeighborGrid::cell_index_axis(double coord, int axis) const {
    std::int64_t i = static_cast<std::int64_t>(std::floor((coord - origin_[axis]) / cell_[axis]));
    if (i < 0) i = 0;
    if (i >= ncells_[axis]) i = ncells_[axis] - 1;
    return i;
}

std::int64_t NeighborGrid::cell_id_from_idx(const std::int64_t* idx) const {
    std::int64_t id = 0;
    for (int a = 0; a < dim_; ++a) id = id * ncells_[a] + idx[a];
    return id;
}

void NeighborGrid::neighbor_axes(const Point& x, std::int64_t cells[][3], int* count) const {
    for (int a = 0; a < dim_; ++a) {
        const std::int64_t i = cell_index_axis(x[a], a);
        const std::int64_t n = ncells_[a];
        count[a] = 0;
        for (int off = -1; off <= 1; ++off) {
            std::int64_t c = i + off;
            if (torus_) {
                c = (c % n + n) % n;
            } else {
                if (c < 0 || c >= n) continue;
            }
            bool dup = false;
            for (int j = 0; j < count[a]; ++j) dup |= cells[a][j] == c;
            if (!dup) cells[a][count[a]++] = c;
        }
    }
}

Point NeighborGrid::wrapped_diff(const Point& a, const Point& b) const {
    Point d{0, 0, 0};
    for (int i = 0; i < dim_; ++i) {
        double v = a[i] - b[i];
        if (torus_) {
            const double L = wrap_len_[i];
            if (v > 0.5 * L) v -= L;
            else if (v < -0.5 * L) v += L;
        }
        d[i] = v;
    }
    return d;
}

// ---------------------------------------------------------------------------
// Graph construction

namespace {

struct UnionFind {
    std::vector<std::int32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::int32_t find(std::int32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

void check_torus_fit(const Window& w, const Shape& shape) {
    if (!w.torus_like()) return;
    for (int a = 0; a < w.dim; ++a)
        require(shape.reach() <= w.half_extent[a],
                "shape reach exceeds half the torus extent");
}

} // namespace

GeomGraph build_graph(const PointConfig& config, const Shape& shape) {
    require(shape.rho > 0.0, "shape.rho must be > 0");
    require(shape.dim == config.dim, "shape dimension must match config");
    require(config.points.size() < (std::size_t{1} << 31), "config too large");
    check_torus_fit(config.window, shape);

    GeomGraph g;
    g.config = config;
    g.shape = shape;
    const auto& pts = g.config.points;
    const std::int32_t n = static_cast<std::int32_t>(pts.size());
    g.adjacency.assign(static_cast<std::size_t>(n), {});

    NeighborGrid grid(pts, config.dim, shape.reach(), config.window);
    for (std::int32_t i = 0; i < n; ++i) {
        grid.for_candidates(pts[static_cast<std::size_t>(i)], [&](std::int32_t j) {
            if (j >= i) return;
            const Point diff = grid.wrapped_diff(pts[static_cast<std::size_t>(i)],
                                                 pts[static_cast<std::size_t>(j)]);
            if (shape.contains(diff)) {
                g.adjacency[static_cast<std::size_t>(i)].push_back(j);
                g.adjacency[static_cast<std::size_t>(j)].push_back(i);
            }
        });
    }
    for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());
    connected_components(g);
    return g;
}

void connected_components(GeomGraph& graph) {
    const std::int32_t n = static_cast<std::int32_t>(graph.config.points.size());
    UnionFind uf(static_cast<std::size_t>(n));
    for (std::int32_t i = 0; i < n; ++i)
        for (std::int32_t j : graph.adjacency[static_cast<std::size_t>(i)])
            if (j < i) uf.unite(i, j);

    graph.component_id.assign(static_cast<std::size_t>(n), -1);
    graph.component_sizes.clear();
    for (std::int32_t i = 0; i < n; ++i) {
        const std::int32_t root = uf.find(i);
        if (graph.component_id[static_cast<std::size_t>(root)] < 0) {
            graph.component_id[static_cast<std::size_t>(root)] =
                static_cast<std::int32_t>(graph.component_sizes.size());
            graph.component_sizes.push_back(0);
        }
        graph.component_id[static_cast<std::size_t>(i)] =
            graph.component_id[static_cast<std::size_t>(root)];
        ++graph.component_sizes[static_cast<std::size_t>(
            graph.component_id[static_cast<std::size_t>(i)])];
    }
}

std::size_t GeomGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& nbrs : adjacency) twice += nbrs.size();
    return twice / 2;
}

// ---------------------------------------------------------------------------
// Packing constant

namespace {

double pair_margin(const Shape& s, const Point& a, const Point& b) {
    // positive iff a - b lies strictly outside S
    if (s.norm == Norm::euclidean) {
        double d2 = 0.0;
        for (int i = 0; i < s.dim; ++i) d2 += sq(a[i] - b[i]);
        return std::sqrt(d2) - s.rho;
    }
    double m = 0.0;
    for (int i = 0; i < s.dim; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m - s.rho;
}

Point random_in_shape(Rng& rng, const Shape& s) {
    for (;;) {
        Point p{0, 0, 0};
        for (int i = 0; i < s.dim; ++i) p[i] = rng.uniform(-s.rho, s.rho);
        if (s.contains(p)) return p;
    }
}

Point project_into_shape(const Shape& s, Point p) {
    if (s.norm == Norm::sup) {
        for (int i = 0; i < s.dim; ++i) p[i] = std::clamp(p[i], -s.rho, s.rho);
        return p;
    }
    double n2 = 0.0;
    for (int i = 0; i < s.dim; ++i) n2 += sq(p[i]);
    const double n = std::sqrt(n2);
    if (n > s.rho)
        for (int i = 0; i < s.dim; ++i) p[i] *= s.rho / n;
    return p;
}

double min_margin(const Shape& s, const std::vector<Point>& pts, int* wi = nullptr,
                  int* wj = nullptr) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double m = pair_margin(s, pts[i], pts[j]);
            if (m < best) {
                best = m;
                if (wi) *wi = static_cast<int>(i);
                if (wj) *wj = static_cast<int>(j);
            }
        }
    return best;
}

// Maximin dispersion search: repeatedly push apart the worst pair, with
// random restarts. Returns true when k points with pairwise differences
// strictly outside S were found (an explicit certificate).
bool try_pack(const Shape& s, int k, Rng& rng) {
    const double eps = 1e-9 * s.rho;
    for (int restart = 0; restart < 48; ++restart) {
        std::vector<Point> pts(static_cast<std::size_t>(k));
        for (auto& p : pts) p = random_in_shape(rng, s);
        double cur = min_margin(s, pts);
        for (int iter = 0; iter < 4000 && cur <= eps; ++iter) {
            int wi = 0, wj = 0;
            min_margin(s, pts, &wi, &wj);
            const int move = rng.u01() < 0.5 ? wi : wj;
            const int other = move == wi ? wj : wi;
            Point cand;
            const double mode = rng.u01();
            if (mode < 0.55) {
                // repel from the worst partner
                const double step = rng.uniform(0.05, 0.5) * s.rho;
                Point dir{0, 0, 0};
                double n2 = 0.0;
                for (int a = 0; a < s.dim; ++a) {
                    dir[a] = pts[static_cast<std::size_t>(move)][a] -
                             pts[static_cast<std::size_t>(other)][a];
                    n2 += sq(dir[a]);
                }
                const double n = std::sqrt(n2);
                cand = pts[static_cast<std::size_t>(move)];
                if (n > 1e-30)
                    for (int a = 0; a < s.dim; ++a) cand[a] += step * dir[a] / n;
                else
                    cand = random_in_shape(rng, s);
                cand = project_into_shape(s, cand);
            } else if (mode < 0.8) {
                cand = pts[static_cast<std::size_t>(move)];
                const double step = 0.2 * s.rho;
                for (int a = 0; a < s.dim; ++a) cand[a] += rng.uniform(-step, step);
                cand = project_into_shape(s, cand);
            } else {
                cand = random_in_shape(rng, s);
            }
            const Point saved = pts[static_cast<std::size_t>(move)];
            pts[static_cast<std::size_t>(move)] = cand;
            const double next = min_margin(s, pts);
            if (next > cur) {
                cur = next;
            } else {
                pts[static_cast<std::size_t>(move)] = saved;
            }
        }
        if (cur > eps) return true;
    }
    return false;
}

} // namespace

PackingResult packing_constant(const Shape& shape) {
    PackingResult res;
    if (shape.norm == Norm::euclidean) {
        if (shape.dim == 1) res.value = 2;
        if (shape.dim == 2) res.value = 5; // regular pentagon; six is impossible
    } else {
        // 2^d corners of the box; a pigeonhole over the 2^d closed
        // half-boxes shows no larger family exists
        res.value = 1 << shape.dim;
    }
    Rng rng(0xC0FFEE0Dull + static_cast<std::uint64_t>(shape.dim) * 7919 +
            (shape.norm == Norm::sup ? 131 : 0));
    int best = 1;
    for (int k = 2; k <= 30; ++k) {
        if (!try_pack(shape, k, rng)) break;
        best = k;
    }
    res.lower_bound = best;
    return res;
}

// ---------------------------------------------------------------------------
// Union volumes

double disk_lens_area(double rho, double s) {
    if (s >= 2.0 * rho) return 0.0;
    if (s <= 0.0) return M_PI * rho * rho;
    return 2.0 * rho * rho * std::acos(s / (2.0 * rho)) -
           0.5 * s * std::sqrt(4.0 * rho * rho - s * s);
}

namespace {

double norm_euclid(const Point& p, int d) {
    double s2 = 0.0;
    for (int i = 0; i < d; ++i) s2 += sq(p[i]);
    return std::sqrt(s2);
}

double sphere_lens_volume(double rho, double s) {
    if (s >= 2.0 * rho) return 0.0;
    if (s <= 0.0) return quad::ball_volume(3, rho);
    return M_PI * (4.0 * rho + s) * sq(2.0 * rho - s) / 12.0;
}

double union_intervals(double rho, const std::vector<Point>& offsets) {
    std::vector<std::pair<double, double>> iv;
    iv.emplace_back(-rho, rho);
    for (const Point& o : offsets) iv.emplace_back(o[0] - rho, o[0] + rho);
    std::sort(iv.begin(), iv.end());
    double total = 0.0, lo = iv[0].first, hi = iv[0].second;
    for (std::size_t i = 1; i < iv.size(); ++i) {
        if (iv[i].first > hi) {
            total += hi - lo;
            lo = iv[i].first;
            hi = iv[i].second;
        } else {
            hi = std::max(hi, iv[i].second);
        }
    }
    return total + (hi - lo);
}

double union_boxes_inclusion_exclusion(const Shape& s, const std::vector<Point>& offsets) {
    std::vector<Point> centers;
    centers.push_back(Point{0, 0, 0});
    centers.insert(centers.end(), offsets.begin(), offsets.end());
    const int k = static_cast<int>(centers.size());
    double total = 0.0;
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        double lo[kMaxDim], hi[kMaxDim];
        for (int a = 0; a < s.dim; ++a) {
            lo[a] = -std::numeric_limits<double>::infinity();
            hi[a] = std::numeric_limits<double>::infinity();
        }
        int bits = 0;
        for (int i = 0; i < k; ++i) {
            if (!(mask & (1u << i))) continue;
            ++bits;
            for (int a = 0; a < s.dim; ++a) {
                lo[a] = std::max(lo[a], centers[static_cast<std::size_t>(i)][a] - s.rho);
                hi[a] = std::min(hi[a], centers[static_cast<std::size_t>(i)][a] + s.rho);
            }
        }
        double vol = 1.0;
        for (int a = 0; a < s.dim; ++a) vol *= std::max(0.0, hi[a] - lo[a]);
        total += (bits % 2 == 1 ? 1.0 : -1.0) * vol;
    }
    return total;
}

UnionVolume union_mc(const Shape& s, const std::vector<Point>& offsets,
                     double rel_se_target, std::uint64_t seed) {
    std::vector<Point> centers;
    centers.push_back(Point{0, 0, 0});
    centers.insert(centers.end(), offsets.begin(), offsets.end());
    Point lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < s.dim; ++a) {
        lo[a] = hi[a] = 0.0;
        for (const Point& c : centers) {
            lo[a] = std::min(lo[a], c[a] - s.rho);
            hi[a] = std::max(hi[a], c[a] + s.rho);
        }
    }
    double box = 1.0;
    for (int a = 0; a < s.dim; ++a) box *= hi[a] - lo[a];

    Rng rng(seed);
    std::int64_t n = 0, hits = 0;
    const std::int64_t batch = 32768, cap = std::int64_t{1} << 24;
    UnionVolume res;
    res.exact = false;
    for (;;) {
        for (std::int64_t i = 0; i < batch; ++i) {
            Point p{0, 0, 0};
            for (int a = 0; a < s.dim; ++a) p[a] = rng.uniform(lo[a], hi[a]);
            for (const Point& c : centers) {
                Point diff{p[0] - c[0], p[1] - c[1], p[2] - c[2]};
                if (s.contains(diff)) {
                    ++hits;
                    break;
                }
            }
        }
        n += batch;
        const double p = double(hits) / double(n);
        res.value = box * p;
        res.std_error = box * std::sqrt(std::max(p * (1.0 - p), 1e-300) / double(n));
        if (hits > 0 && res.std_error <= rel_se_target * res.value) break;
        if (n >= cap) break;
    }
    return res;
}

} // namespace

UnionVolume union_volume(const Shape& shape, const std::vector<Point>& offsets,
                         double rel_se_target, std::uint64_t seed) {
    require(rel_se_target > 0.0, "requested relative standard error must be > 0");
    UnionVolume res;
    if (offsets.empty()) {
        res.value = shape.volume();
        return res;
    }
    if (shape.dim == 1) {
        res.value = union_intervals(shape.rho, offsets);
        return res;
    }
    if (shape.norm == Norm::sup && offsets.size() <= 11) {
        res.value = union_boxes_inclusion_exclusion(shape, offsets);
        return res;
    }
    if (shape.norm == Norm::euclidean && offsets.size() == 1) {
        const double s = norm_euclid(offsets[0], shape.dim);
        if (shape.dim == 2) {
            res.value = 2.0 * M_PI * sq(shape.rho) - disk_lens_area(shape.rho, s);
            return res;
        }
        if (shape.dim == 3) {
            res.value = 2.0 * quad::ball_volume(3, shape.rho) -
                        sphere_lens_volume(shape.rho, s);
            return res;
        }
    }
    return union_mc(shape, offsets, rel_se_target, seed);
}

} // namespace geomconc
