#include "geomconc/components.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace geomconc {

namespace {

constexpr std::int64_t kFactorial[11] = {1,    1,     2,      6,       24,      120,
                                         720,  5040,  40320,  362880,  3628800};

struct DenseAdj {
    int k = 0;
    bool a[10][10] = {};
};

DenseAdj unpack_bits(int k, GraphBits bits) {
    DenseAdj d;
    d.k = k;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            const bool e = (bits >> triangle_bit_index(k, i, j)) & 1u;
            d.a[i][j] = d.a[j][i] = e;
        }
    return d;
}

} // namespace

std::uint64_t graph_degree_key(int k, GraphBits bits) {
    int deg[10] = {};
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if ((bits >> triangle_bit_index(k, i, j)) & 1u) {
                ++deg[i];
                ++deg[j];
            }
    std::sort(deg, deg + k);
    std::uint64_t key = 0;
    for (int i = 0; i < k; ++i) key = key * 11 + static_cast<std::uint64_t>(deg[i]);
    return key;
}

namespace {

// Exact minimum of the (column-ordered) upper-triangle bit code over all
// vertex relabelings, by backtracking with prefix pruning.
struct CanonicalSearch {
    const DenseAdj* adj;
    int k = 0;
    int total_bits = 0;
    GraphBits best = ~GraphBits{0};
    int perm[10] = {};
    bool used[10] = {};

    void run() {
        total_bits = k * (k - 1) / 2;
        place(0, 0, 0);
    }

    void place(int pos, GraphBits prefix, int bits_so_far) {
        if (pos == k) {
            if (prefix < best) best = prefix;
            return;
        }
        for (int v = 0; v < k; ++v) {
            if (used[v]) continue;
            GraphBits next = prefix;
            for (int i = 0; i < pos; ++i)
                next = (next << 1) | GraphBits(adj->a[perm[i]][v] ? 1 : 0);
            const int next_bits = bits_so_far + pos;
            if (best != ~GraphBits{0}) {
                const GraphBits best_prefix = best >> (total_bits - next_bits);
                if (next > best_prefix) continue;
            }
            used[v] = true;
            perm[pos] = v;
            place(pos + 1, next, next_bits);
            used[v] = false;
        }
    }
};

} // namespace

GraphBits graph_bits_from_matrix(const std::vector<std::vector<int>>& adj) {
    const int k = static_cast<int>(adj.size());
    require(k >= 1 && k <= 10, "adjacency must have 1..10 vertices");
    GraphBits bits = 0;
    for (int i = 0; i < k; ++i) {
        require(static_cast<int>(adj[static_cast<std::size_t>(i)].size()) == k,
                "adjacency matrix must be square");
        require(adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] == 0,
                "adjacency diagonal must be zero");
        for (int j = 0; j < k; ++j) {
            const int v = adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            require(v == 0 || v == 1, "adjacency entries must be 0 or 1");
            require(v == adj[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)],
                    "adjacency matrix must be symmetric");
            if (i < j && v) bits |= GraphBits{1} << triangle_bit_index(k, i, j);
        }
    }
    return bits;
}

bool graph_bits_connected(int k, GraphBits bits) {
    if (k <= 1) return true;
    std::uint32_t nbr[10] = {};
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if ((bits >> triangle_bit_index(k, i, j)) & 1u) {
                nbr[i] |= 1u << j;
                nbr[j] |= 1u << i;
            }
    std::uint32_t seen = 1u, frontier = 1u;
    while (frontier) {
        std::uint32_t next = 0;
        for (int i = 0; i < k; ++i)
            if (frontier & (1u << i)) next |= nbr[i];
        frontier = next & ~seen;
        seen |= next;
    }
    return seen == (1u << k) - 1u;
}

GraphBits canonical_form(int k, GraphBits bits) {
    require(k >= 1 && k <= 10, "canonical form supports 1..10 vertices");
    if (k == 1) return 0;
    const DenseAdj adj = unpack_bits(k, bits);
    CanonicalSearch search;
    search.adj = &adj;
    search.k = k;
    search.run();
    return search.best;
}

// ---------------------------------------------------------------------------
// Selector

Selector Selector::at_most(int k) {
    require(k >= 1 && k <= 10, "selector.k must be in 1..10");
    Selector s;
    s.kind = SelectorKind::at_most_k;
    s.k = k;
    return s;
}

Selector Selector::exactly(int k) {
    require(k >= 1 && k <= 10, "selector.k must be in 1..10");
    Selector s;
    s.kind = SelectorKind::exactly_k;
    s.k = k;
    return s;
}

Selector Selector::iso(const std::vector<std::vector<int>>& h_adjacency) {
    const int k = static_cast<int>(h_adjacency.size());
    const GraphBits bits = graph_bits_from_matrix(h_adjacency);
    require(graph_bits_connected(k, bits), "H must be connected");
    Selector s;
    s.kind = SelectorKind::iso_to_h;
    s.k = k;
    s.h_code = canonical_form(k, bits);
    s.h_degree_key = graph_degree_key(k, bits);
    s.h_bits_raw.assign(static_cast<std::size_t>(k * (k - 1) / 2), '0');
    for (int i = 0; i < k * (k - 1) / 2; ++i)
        if ((bits >> i) & 1u) s.h_bits_raw[static_cast<std::size_t>(i)] = '1';
    return s;
}

Selector Selector::iso_from_bits(int k, const std::string& upper_triangle_bits) {
    require(k >= 1 && k <= 10, "selector.k must be in 1..10");
    require(static_cast<int>(upper_triangle_bits.size()) == k * (k - 1) / 2,
            "H bit string must have k(k-1)/2 characters");
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(k),
                                      std::vector<int>(static_cast<std::size_t>(k), 0));
    for (int i = 0, idx = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j, ++idx) {
            const char c = upper_triangle_bits[static_cast<std::size_t>(idx)];
            require(c == '0' || c == '1', "H bit string must contain only 0/1");
            adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                adj[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = c == '1';
        }
    return iso(adj);
}

// ---------------------------------------------------------------------------
// Census and counts on a built graph

namespace {

std::vector<std::vector<std::int32_t>> members_by_component(const GeomGraph& g) {
    std::vector<std::vector<std::int32_t>> members(g.component_sizes.size());
    for (std::size_t c = 0; c < members.size(); ++c)
        members[c].reserve(static_cast<std::size_t>(g.component_sizes[c]));
    for (std::size_t i = 0; i < g.config.points.size(); ++i)
        members[static_cast<std::size_t>(g.component_id[i])].push_back(
            static_cast<std::int32_t>(i));
    return members;
}

GraphBits induced_bits(const std::vector<Point>& pts, const std::vector<std::int32_t>& idx,
                       const Shape& shape, const NeighborGrid* grid, const Point* extra) {
    const int k = static_cast<int>(idx.size()) + (extra ? 1 : 0);
    GraphBits bits = 0;
    auto point_at = [&](int i) -> const Point& {
        if (extra && i == k - 1) return *extra;
        return pts[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    };
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            Point diff;
            if (grid) {
                diff = grid->wrapped_diff(point_at(i), point_at(j));
            } else {
                const Point &a = point_at(i), &b = point_at(j);
                diff = Point{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
            }
            if (shape.contains(diff)) bits |= GraphBits{1} << triangle_bit_index(k, i, j);
        }
    return bits;
}

} // namespace

ComponentCensus census(const GeomGraph& graph, int iso_depth) {
    require(iso_depth >= 0 && iso_depth <= 10, "iso depth must be in 0..10");
    ComponentCensus out;
    out.iso_depth = iso_depth;
    out.total_components = static_cast<std::int64_t>(graph.component_sizes.size());
    for (const std::int32_t s : graph.component_sizes) ++out.counts_by_size[s];

    if (iso_depth > 0) {
        NeighborGrid grid(graph.config.points, graph.config.dim, graph.shape.reach(),
                          graph.config.window);
        const auto members = members_by_component(graph);
        for (const auto& m : members) {
            const int s = static_cast<int>(m.size());
            if (s > iso_depth) continue;
            const GraphBits bits =
                induced_bits(graph.config.points, m, graph.shape, &grid, nullptr);
            ++out.counts_by_isoclass[{s, canonical_form(s, bits)}];
        }
    }
    return out;
}

std::int64_t count_f(const GeomGraph& graph, const Selector& selector) {
    if (!selector.needs_iso()) {
        std::int64_t n = 0;
        for (const std::int32_t s : graph.component_sizes)
            if (selector.size_admissible(s)) ++n;
        return n;
    }
    NeighborGrid grid(graph.config.points, graph.config.dim, graph.shape.reach(),
                      graph.config.window);
    const auto members = members_by_component(graph);
    std::int64_t n = 0;
    for (const auto& m : members) {
        if (static_cast<int>(m.size()) != selector.k) continue;
        const GraphBits bits =
            induced_bits(graph.config.points, m, graph.shape, &grid, nullptr);
        if (graph_degree_key(selector.k, bits) != selector.h_degree_key) continue;
        if (canonical_form(selector.k, bits) == selector.h_code) ++n;
    }
    return n;
}

// ---------------------------------------------------------------------------
// U-statistic via connected-subgraph enumeration (ESU)

namespace {

struct EsuCounter {
    int k = 0;
    const Selector* selector = nullptr;
    const std::vector<std::uint64_t>* adj = nullptr; // local adjacency masks
    const std::vector<std::int32_t>* local_to_global = nullptr;
    const std::vector<Point>* pts = nullptr;
    const Shape* shape = nullptr;
    const NeighborGrid* grid = nullptr;
    std::int64_t matches = 0;

    void emit(std::uint64_t sub) {
        if (selector->kind == SelectorKind::exactly_k) {
            ++matches;
            return;
        }
        std::vector<std::int32_t> idx;
        idx.reserve(static_cast<std::size_t>(k));
        for (std::uint64_t m = sub; m; m &= m - 1)
            idx.push_back((*local_to_global)[static_cast<std::size_t>(std::countr_zero(m))]);
        const GraphBits bits = induced_bits(*pts, idx, *shape, grid, nullptr);
        if (graph_degree_key(k, bits) != selector->h_degree_key) return;
        if (canonical_form(k, bits) == selector->h_code) ++matches;
    }

    void extend(std::uint64_t sub, std::uint64_t ext, std::uint64_t seen) {
        if (std::popcount(sub) == k) {
            emit(sub);
            return;
        }
        while (ext) {
            const int w = std::countr_zero(ext);
            ext &= ext - 1;
            const std::uint64_t grow =
                (*adj)[static_cast<std::size_t>(w)] & ~seen;
            extend(sub | (std::uint64_t{1} << w), ext | grow,
                   seen | grow | (std::uint64_t{1} << w));
        }
    }

    void run_component(int m) {
        for (int v = 0; v < m; ++v) {
            const std::uint64_t above = ~((std::uint64_t{2} << v) - 1);
            const std::uint64_t ext = (*adj)[static_cast<std::size_t>(v)] & above;
            const std::uint64_t seen =
                ((std::uint64_t{2} << v) - 1) | (*adj)[static_cast<std::size_t>(v)];
            extend(std::uint64_t{1} << v, ext, seen);
        }
    }
};

} // namespace

std::int64_t count_u(const GeomGraph& graph, const Selector& selector, int component_cap) {
    require(selector.fixed_size(), "count_u requires a fixed-size selector");
    const int k = selector.k;
    if (k == 1) return static_cast<std::int64_t>(graph.vertex_count());
    if (k == 2) return 2 * static_cast<std::int64_t>(graph.edge_count());

    require(component_cap >= k && component_cap <= 63, "component cap must be in k..63");
    NeighborGrid grid(graph.config.points, graph.config.dim, graph.shape.reach(),
                      graph.config.window);
    const auto members = members_by_component(graph);
    std::int64_t matches = 0;
    for (const auto& m : members) {
        const int sz = static_cast<int>(m.size());
        if (sz < k) continue;
        if (sz > component_cap) throw std::runtime_error("U enumeration infeasible");
        // local adjacency masks
        std::vector<std::uint64_t> adj(static_cast<std::size_t>(sz), 0);
        for (int i = 0; i < sz; ++i)
            for (int j = i + 1; j < sz; ++j) {
                const Point diff = grid.wrapped_diff(
                    graph.config.points[static_cast<std::size_t>(m[static_cast<std::size_t>(i)])],
                    graph.config.points[static_cast<std::size_t>(m[static_cast<std::size_t>(j)])]);
                if (graph.shape.contains(diff)) {
                    adj[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j;
                    adj[static_cast<std::size_t>(j)] |= std::uint64_t{1} << i;
                }
            }
        EsuCounter esu;
        esu.k = k;
        esu.selector = &selector;
        esu.adj = &adj;
        esu.local_to_global = &m;
        esu.pts = &graph.config.points;
        esu.shape = &graph.shape;
        esu.grid = &grid;
        esu.run_component(sz);
        matches += esu.matches;
    }
    return matches * kFactorial[k];
}

// ---------------------------------------------------------------------------
// DiffOps

DiffOps::DiffOps(const PointConfig& config, const Shape& shape)
    : config_(&config),
      shape_(shape),
      grid_(config.points, config.dim, shape.reach(), config.window) {
    require(shape.dim == config.dim, "shape dimension must match config");
    require(config.points.size() < (std::size_t{1} << 31), "config too large");
    const std::int32_t n = static_cast<std::int32_t>(config.points.size());

    std::vector<std::int32_t> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::int32_t x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (std::int32_t i = 0; i < n; ++i) {
        grid_.for_candidates(config.points[static_cast<std::size_t>(i)], [&](std::int32_t j) {
            if (j >= i) return;
            const Point diff = grid_.wrapped_diff(config.points[static_cast<std::size_t>(i)],
                                                  config.points[static_cast<std::size_t>(j)]);
            if (!shape_.contains(diff)) return;
            const std::int32_t a = find(i), b = find(j);
            if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        });
    }
    comp_id_.assign(static_cast<std::size_t>(n), -1);
    for (std::int32_t i = 0; i < n; ++i) {
        const std::int32_t root = find(i);
        if (comp_id_[static_cast<std::size_t>(root)] < 0) {
            comp_id_[static_cast<std::size_t>(root)] =
                static_cast<std::int32_t>(members_.size());
            members_.emplace_back();
        }
        comp_id_[static_cast<std::size_t>(i)] = comp_id_[static_cast<std::size_t>(root)];
        members_[static_cast<std::size_t>(comp_id_[static_cast<std::size_t>(i)])].push_back(i);
    }
}

int DiffOps::match(const Selector& selector, const std::vector<std::int32_t>& member_indices,
                   const Point* extra) const {
    const int size = static_cast<int>(member_indices.size()) + (extra ? 1 : 0);
    if (!selector.size_admissible(size)) return 0;
    if (!selector.needs_iso()) return 1;
    const GraphBits bits =
        induced_bits(config_->points, member_indices, shape_, &grid_, extra);
    if (graph_degree_key(size, bits) != selector.h_degree_key) return 0;
    return canonical_form(size, bits) == selector.h_code ? 1 : 0;
}

std::int64_t DiffOps::count_f(const Selector& selector) const {
    std::int64_t n = 0;
    for (const auto& m : members_) n += match(selector, m);
    return n;
}

std::int64_t DiffOps::add_one_cost(const Selector& selector, const Point& x) const {
    std::vector<std::int32_t> touched;
    bool duplicate = false;
    grid_.for_candidates(x, [&](std::int32_t j) {
        const Point& pj = config_->points[static_cast<std::size_t>(j)];
        if (pj == x) duplicate = true;
        const Point diff = grid_.wrapped_diff(x, pj);
        if (!shape_.contains(diff)) return;
        const std::int32_t c = comp_id_[static_cast<std::size_t>(j)];
        if (std::find(touched.begin(), touched.end(), c) == touched.end())
            touched.push_back(c);
    });
    require(!duplicate, "point already present in the configuration");

    if (touched.empty()) {
        static const std::vector<std::int32_t> kEmpty;
        return match(selector, kEmpty, &x);
    }
    std::int64_t old_sum = 0;
    std::size_t merged_size = 1;
    for (const std::int32_t c : touched) {
        old_sum += match(selector, members_[static_cast<std::size_t>(c)]);
        merged_size += members_[static_cast<std::size_t>(c)].size();
    }
    int new_match = 0;
    if (selector.size_admissible(static_cast<int>(merged_size))) {
        std::vector<std::int32_t> merged;
        merged.reserve(merged_size - 1);
        for (const std::int32_t c : touched)
            merged.insert(merged.end(), members_[static_cast<std::size_t>(c)].begin(),
                          members_[static_cast<std::size_t>(c)].end());
        new_match = match(selector, merged, &x);
    }
    return new_match - old_sum;
}

std::int64_t DiffOps::remove_one_cost(const Selector& selector, std::int32_t index) const {
    require(index >= 0 && index < static_cast<std::int32_t>(config_->points.size()),
            "invalid vertex index");
    const std::int32_t c = comp_id_[static_cast<std::size_t>(index)];
    const auto& m = members_[static_cast<std::size_t>(c)];
    const std::int64_t old_match = match(selector, m);
    if (m.size() == 1) return old_match;

    // split the component without `index` by BFS over its residual members;
    // the local-index scratch is reset to -1 on exit
    static thread_local std::vector<std::int32_t> local_of;
    if (local_of.size() < config_->points.size()) local_of.resize(config_->points.size(), -1);
    std::vector<std::int8_t> done(m.size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i)
        local_of[static_cast<std::size_t>(m[i])] = static_cast<std::int32_t>(i);
    const std::int32_t skip = local_of[static_cast<std::size_t>(index)];
    done[static_cast<std::size_t>(skip)] = 1;

    std::int64_t new_sum = 0;
    std::vector<std::int32_t> piece;
    for (std::size_t start = 0; start < m.size(); ++start) {
        if (done[start]) continue;
        piece.clear();
        piece.push_back(m[start]);
        done[start] = 1;
        for (std::size_t qp = 0; qp < piece.size(); ++qp) {
            const Point& pu = config_->points[static_cast<std::size_t>(piece[qp])];
            grid_.for_candidates(pu, [&](std::int32_t j) {
                const std::int32_t lj = local_of[static_cast<std::size_t>(j)];
                if (lj < 0 || done[static_cast<std::size_t>(lj)]) return;
                const Point diff =
                    grid_.wrapped_diff(pu, config_->points[static_cast<std::size_t>(j)]);
                if (!shape_.contains(diff)) return;
                done[static_cast<std::size_t>(lj)] = 1;
                piece.push_back(j);
            });
        }
        new_sum += match(selector, piece);
    }
    for (const std::int32_t v : m) local_of[static_cast<std::size_t>(v)] = -1;
    return old_match - new_sum;
}

bool DiffOps::in_selected_support(const Selector& selector, const Point& x) const {
    bool found = false;
    grid_.for_candidates(x, [&](std::int32_t j) {
        if (found) return;
        const Point diff = grid_.wrapped_diff(x, config_->points[static_cast<std::size_t>(j)]);
        if (!shape_.contains(diff)) return;
        const std::int32_t c = comp_id_[static_cast<std::size_t>(j)];
        if (match(selector, members_[static_cast<std::size_t>(c)])) found = true;
    });
    return found;
}

std::int64_t add_one_cost(const PointConfig& config, const Shape& shape,
                          const Selector& selector, const Point& x) {
    return DiffOps(config, shape).add_one_cost(selector, x);
}

std::int64_t remove_one_cost(const PointConfig& config, const Shape& shape,
                             const Selector& selector, std::int32_t index) {
    return DiffOps(config, shape).remove_one_cost(selector, index);
}

// ---------------------------------------------------------------------------
// Streaming census with bounded exploration

SmallCompCounts count_small_components(const std::vector<Point>& points,
                                       const Window& window, const Shape& shape,
                                       std::span<const Selector> selectors,
                                       bool count_edges) {
    int depth = 0;
    for (const Selector& s : selectors) depth = std::max(depth, s.k);
    require(depth >= 1 && depth <= 10, "selector sizes must be in 1..10");

    SmallCompCounts out;
    out.raw.assign(selectors.size(), 0);
    out.eroded.assign(selectors.size(), 0);

    const std::int32_t n = static_cast<std::int32_t>(points.size());
    if (n == 0) return out;
    NeighborGrid grid(points, window.dim, shape.reach(), window);

    // boundary depth of a point: distance to the window boundary
    const bool torus = window.torus_like();
    auto boundary_depth = [&](const Point& p) -> double {
        if (torus) return std::numeric_limits<double>::infinity();
        if (window.kind == WindowKind::ball) {
            double s2 = 0.0;
            for (int i = 0; i < window.dim; ++i) s2 += sq(p[i] - window.center[i]);
            return window.half_extent[0] - std::sqrt(s2);
        }
        double m = std::numeric_limits<double>::infinity();
        for (int i = 0; i < window.dim; ++i)
            m = std::min(m, window.half_extent[i] - std::fabs(p[i] - window.center[i]));
        return m;
    };

    std::vector<std::int8_t> visited(static_cast<std::size_t>(n), 0);
    std::vector<std::int32_t> collected;
    collected.reserve(static_cast<std::size_t>(depth) + 2);

    for (std::int32_t i = 0; i < n; ++i) {
        if (visited[static_cast<std::size_t>(i)]) continue;
        collected.clear();
        collected.push_back(i);
        bool big = false;
        for (std::size_t qp = 0; qp < collected.size() && !big; ++qp) {
            const Point& pu = points[static_cast<std::size_t>(collected[qp])];
            grid.for_candidates(pu, [&](std::int32_t j) {
                if (big || j == collected[qp]) return;
                const Point diff = grid.wrapped_diff(pu, points[static_cast<std::size_t>(j)]);
                if (!shape.contains(diff)) return;
                if (visited[static_cast<std::size_t>(j)]) {
                    big = true; // j belongs to a previously-abandoned large component
                    return;
                }
                if (std::find(collected.begin(), collected.end(), j) != collected.end())
                    return;
                collected.push_back(j);
                if (static_cast<int>(collected.size()) > depth) big = true;
            });
        }
        for (const std::int32_t v : collected) visited[static_cast<std::size_t>(v)] = 1;
        if (big) continue;

        const int size = static_cast<int>(collected.size());
        double min_depth = std::numeric_limits<double>::infinity();
        for (const std::int32_t v : collected)
            min_depth = std::min(min_depth, boundary_depth(points[static_cast<std::size_t>(v)]));

        GraphBits bits = 0;
        bool bits_ready = false;
        for (std::size_t s = 0; s < selectors.size(); ++s) {
            const Selector& sel = selectors[s];
            if (!sel.size_admissible(size)) continue;
            if (sel.needs_iso()) {
                if (!bits_ready) {
                    bits = induced_bits(points, collected, shape, &grid, nullptr);
                    bits_ready = true;
                }
                if (graph_degree_key(size, bits) != sel.h_degree_key) continue;
                if (canonical_form(size, bits) != sel.h_code) continue;
            }
            ++out.raw[s];
            if (min_depth >= double(sel.k) * shape.reach()) ++out.eroded[s];
        }
    }

    if (count_edges) {
        for (std::int32_t i = 0; i < n; ++i) {
            const Point& pi = points[static_cast<std::size_t>(i)];
            grid.for_candidates(pi, [&](std::int32_t j) {
                if (j >= i) return;
                const Point diff = grid.wrapped_diff(pi, points[static_cast<std::size_t>(j)]);
                if (shape.contains(diff)) ++out.edges;
            });
        }
    }
    return out;
}

} // namespace geomconc
