#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "oracles.hpp"

using namespace geomconc;

namespace {

// 3-path config: points at -1, 0, 1 with rho = 1
PointConfig three_path(const Window& w) {
    return make_config(2, {Point{-1, 0, 0}, Point{0, 0, 0}, Point{1, 0, 0}}, w);
}

Selector random_selector(Rng& rng, int max_k) {
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_k)));
    const double u = rng.u01();
    if (u < 0.4) return Selector::at_most(k);
    if (u < 0.8 || k == 1) return Selector::exactly(k);
    switch (rng.below(3)) {
        case 0: return Selector::iso(oracle::path_graph(k));
        case 1: return Selector::iso(oracle::complete_graph(k));
        default: return Selector::iso(oracle::star_graph(k));
    }
}

} // namespace

TEST_CASE("canonical form is invariant under relabeling") {
    const GraphBits a = graph_bits_from_matrix({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}});
    const GraphBits b = graph_bits_from_matrix({{0, 1, 1}, {1, 0, 0}, {1, 0, 0}});
    CHECK(canonical_form(3, a) == canonical_form(3, b));
    const GraphBits tri = graph_bits_from_matrix({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    CHECK(canonical_form(3, a) != canonical_form(3, tri));
}

TEST_CASE("canonical form rejects malformed adjacency") {
    CHECK_THROWS_AS(graph_bits_from_matrix({{1, 0}, {0, 0}}), validation_error);
    CHECK_THROWS_AS(graph_bits_from_matrix({{0, 1}, {0, 0}}), validation_error);
    CHECK_THROWS_AS(graph_bits_from_matrix({{0, 1, 0}, {1, 0, 1}}), validation_error);
}

TEST_CASE("all 11 isomorphism classes of 4-vertex graphs get distinct codes") {
    std::set<GraphBits> codes;
    std::map<GraphBits, int> bucket_sizes;
    for (GraphBits bits = 0; bits < 64; ++bits) {
        const GraphBits code = canonical_form(4, bits);
        codes.insert(code);
        ++bucket_sizes[code];
    }
    CHECK(codes.size() == 11); // known count of unlabeled 4-vertex graphs
    int total = 0;
    for (const auto& [code, n] : bucket_sizes) total += n;
    CHECK(total == 64);
}

TEST_CASE("canonical form equals brute-force minimum over permutations") {
    Rng rng(3111);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(4)); // 2..5
        const int nbits = k * (k - 1) / 2;
        const GraphBits bits = rng.next_u64() & ((GraphBits{1} << nbits) - 1);
        std::vector<int> perm(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) perm[static_cast<std::size_t>(i)] = i;
        GraphBits best = ~GraphBits{0};
        auto edge = [&](int i, int j) -> bool {
            if (i > j) std::swap(i, j);
            return (bits >> triangle_bit_index(k, i, j)) & 1u;
        };
        do {
            GraphBits code = 0;
            for (int j = 1; j < k; ++j)
                for (int i = 0; i < j; ++i)
                    code = (code << 1) |
                           GraphBits(edge(perm[static_cast<std::size_t>(i)],
                                          perm[static_cast<std::size_t>(j)]) ? 1 : 0);
            best = std::min(best, code);
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(canonical_form(k, bits) == best);
    }
}

TEST_CASE("selector construction validates H") {
    CHECK_THROWS_AS(Selector::iso({{0, 0}, {0, 0}}), validation_error); // disconnected
    CHECK_NOTHROW(Selector::iso(oracle::path_graph(3)));
    CHECK_THROWS_AS(Selector::at_most(11), validation_error);
    const Selector s = Selector::iso_from_bits(3, "110");
    CHECK(s.h_code == canonical_form(3, graph_bits_from_matrix(
                                            {{0, 1, 1}, {1, 0, 0}, {1, 0, 0}})));
}

TEST_CASE("count_f on the 3-path") {
    const Window w = Window::box(2, Point{5, 5, 0});
    const PointConfig cfg = three_path(w);
    const GeomGraph g = build_graph(cfg, Shape::euclidean_ball(1.0, 2));
    CHECK(count_f(g, Selector::exactly(3)) == 1);
    CHECK(count_f(g, Selector::exactly(2)) == 0);
    CHECK(count_f(g, Selector::iso(oracle::complete_graph(3))) == 0);
    CHECK(count_f(g, Selector::iso(oracle::path_graph(3))) == 1);
}

TEST_CASE("count_f decomposes over exact sizes") {
    Rng rng(515);
    const Window w = Window::box(2, Point{7, 7, 0});
    for (int trial = 0; trial < 10; ++trial) {
        PointConfig cfg = oracle::random_config(rng, 2, 200, w);
        const GeomGraph g =
            build_graph(cfg, Shape::euclidean_ball(rng.uniform(0.3, 0.8), 2));
        const std::int64_t at_most = count_f(g, Selector::at_most(3));
        std::int64_t sum = 0;
        for (int i = 1; i <= 3; ++i) sum += count_f(g, Selector::exactly(i));
        CHECK(at_most == sum);
    }
}

TEST_CASE("count_u on the 3-path") {
    const Window w = Window::box(2, Point{5, 5, 0});
    const GeomGraph g = build_graph(three_path(w), Shape::euclidean_ball(1.0, 2));
    CHECK(count_u(g, Selector::exactly(2)) == 4);  // 2 edges x 2!
    CHECK(count_u(g, Selector::exactly(3)) == 6);  // one connected triple x 3!
    CHECK(count_u(g, Selector::iso(oracle::path_graph(3))) == 6);
    CHECK(count_u(g, Selector::iso(oracle::complete_graph(3))) == 0);
}

TEST_CASE("count_u dominates k! count_f pathwise") {
    Rng rng(909);
    const Window w = Window::box(2, Point{8, 8, 0});
    for (int trial = 0; trial < 40; ++trial) {
        PointConfig cfg = oracle::random_config(rng, 2, 150, w);
        const Shape shape = Shape::euclidean_ball(rng.uniform(0.2, 0.5), 2);
        const GeomGraph g = build_graph(cfg, shape);
        for (const int k : {1, 2, 3}) {
            const Selector sel = Selector::exactly(k);
            std::int64_t fact = 1;
            for (int i = 2; i <= k; ++i) fact *= i;
            std::int64_t u = 0;
            bool feasible = true;
            try {
                u = count_u(g, sel);
            } catch (const std::runtime_error&) {
                feasible = false; // a component exceeded the enumeration cap
            }
            if (feasible) CHECK(u >= fact * count_f(g, sel));
        }
    }
}

TEST_CASE("count_u matches brute-force subset enumeration on small configs") {
    Rng rng(7007);
    const Window w = Window::box(2, Point{3, 3, 0});
    for (int trial = 0; trial < 30; ++trial) {
        PointConfig cfg = oracle::random_config(rng, 2, 12, w);
        const Shape shape = Shape::euclidean_ball(rng.uniform(0.5, 1.5), 2);
        const GeomGraph g = build_graph(cfg, shape);
        const int k = 2 + static_cast<int>(rng.below(2));
        const Selector sel = Selector::exactly(k);
        const int n = static_cast<int>(cfg.points.size());
        std::int64_t connected_subsets = 0;
        std::vector<int> idx(static_cast<std::size_t>(k));
        std::function<void(int, int)> rec = [&](int start, int chosen) {
            if (chosen == k) {
                std::vector<std::vector<int>> adj(
                    static_cast<std::size_t>(k),
                    std::vector<int>(static_cast<std::size_t>(k), 0));
                for (int i = 0; i < k; ++i)
                    for (int j = i + 1; j < k; ++j) {
                        const Point d = oracle::brute_diff(
                            w,
                            cfg.points[static_cast<std::size_t>(
                                idx[static_cast<std::size_t>(i)])],
                            cfg.points[static_cast<std::size_t>(
                                idx[static_cast<std::size_t>(j)])]);
                        adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                            adj[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                                shape.contains(d);
                    }
                if (graph_bits_connected(k, graph_bits_from_matrix(adj)))
                    ++connected_subsets;
                return;
            }
            for (int v = start; v < n; ++v) {
                idx[static_cast<std::size_t>(chosen)] = v;
                rec(v + 1, chosen + 1);
            }
        };
        rec(0, 0);
        std::int64_t fact = 1;
        for (int i = 2; i <= k; ++i) fact *= i;
        CHECK(count_u(g, sel) == fact * connected_subsets);
    }
}

TEST_CASE("count_u errors on oversized components and at_most selectors") {
    const Window w = Window::box(2, Point{30, 30, 0});
    std::vector<Point> pts;
    for (int i = 0; i < 45; ++i) pts.push_back(Point{0.5 * i - 11.0, 0, 0});
    const PointConfig cfg = make_config(2, pts, w);
    const GeomGraph g = build_graph(cfg, Shape::euclidean_ball(0.6, 2));
    CHECK_THROWS_WITH_AS(static_cast<void>(count_u(g, Selector::exactly(3))),
                         "U enumeration infeasible", std::runtime_error);
    CHECK_THROWS_AS(static_cast<void>(count_u(g, Selector::at_most(2))),
                    validation_error);
    // k = 2 reduces to edge counting and stays feasible
    CHECK(count_u(g, Selector::exactly(2)) == 2 * 44);
}

TEST_CASE("add_one_cost simple cases") {
    const Window w = Window::box(2, Point{5, 5, 0});
    const Shape shape = Shape::euclidean_ball(1.0, 2);
    const Selector ones = Selector::exactly(1);

    PointConfig cfg = make_config(2, {Point{-3, 0, 0}, Point{3, 0, 0}}, w);
    CHECK(add_one_cost(cfg, shape, ones, Point{0, 3, 0}) == 1);

    // midpoint merges two singletons at distance 1.5 rho
    PointConfig cfg2 = make_config(2, {Point{-0.75, 0, 0}, Point{0.75, 0, 0}}, w);
    CHECK(add_one_cost(cfg2, shape, ones, Point{0, 0, 0}) == -2);

    CHECK_THROWS_AS(
        static_cast<void>(add_one_cost(cfg2, shape, ones, Point{-0.75, 0, 0})),
        validation_error);
}

TEST_CASE("remove_one_cost simple cases") {
    const Window w = Window::box(2, Point{5, 5, 0});
    const Shape shape = Shape::euclidean_ball(1.0, 2);
    const Selector ones = Selector::exactly(1);

    PointConfig lone = make_config(2, {Point{0, 0, 0}}, w);
    CHECK(remove_one_cost(lone, shape, ones, 0) == 1);

    // middle of a 3-path: removal creates two singletons
    PointConfig path = three_path(w);
    CHECK(remove_one_cost(path, shape, ones, 1) == -2);
    CHECK_THROWS_AS(static_cast<void>(remove_one_cost(path, shape, ones, 9)),
                    validation_error);
}

TEST_CASE("add_one_cost equals the full-rebuild oracle on 500 random trials") {
    Rng rng(112233);
    int done = 0;
    while (done < 500) {
        const int dim = 1 + static_cast<int>(rng.below(2));
        const double h = rng.uniform(2.0, 6.0);
        const Window w = Window::box(dim, Point{h, h, h});
        const Shape shape = rng.u01() < 0.5
                                ? Shape::euclidean_ball(rng.uniform(0.2, 1.0), dim)
                                : Shape::sup_box(rng.uniform(0.2, 0.8), dim);
        PointConfig cfg = oracle::random_config(rng, dim, 120, w);
        const Selector sel = random_selector(rng, 5);
        Point x{0, 0, 0};
        for (int a = 0; a < dim; ++a) x[a] = rng.uniform(-h, h);
        std::int64_t incremental;
        try {
            incremental = add_one_cost(cfg, shape, sel, x);
        } catch (const validation_error&) {
            continue; // duplicate probe point
        }
        auto with_x = cfg.points;
        with_x.push_back(x);
        const std::int64_t oracle_diff =
            oracle::count_f_rebuild(with_x, w, shape, sel) -
            oracle::count_f_rebuild(cfg.points, w, shape, sel);
        REQUIRE(incremental == oracle_diff);
        ++done;
    }
}

TEST_CASE("remove_one_cost equals the full-rebuild oracle on 500 random trials") {
    Rng rng(445566);
    int done = 0;
    while (done < 500) {
        const int dim = 1 + static_cast<int>(rng.below(2));
        const double h = rng.uniform(2.0, 6.0);
        const Window w = Window::box(dim, Point{h, h, h});
        const Shape shape = rng.u01() < 0.5
                                ? Shape::euclidean_ball(rng.uniform(0.2, 1.0), dim)
                                : Shape::sup_box(rng.uniform(0.2, 0.8), dim);
        PointConfig cfg = oracle::random_config(rng, dim, 120, w);
        if (cfg.points.empty()) continue;
        const Selector sel = random_selector(rng, 5);
        const std::int32_t idx =
            static_cast<std::int32_t>(rng.below(cfg.points.size()));
        const std::int64_t incremental = remove_one_cost(cfg, shape, sel, idx);
        auto without = cfg.points;
        without.erase(without.begin() + idx);
        const std::int64_t oracle_diff =
            oracle::count_f_rebuild(cfg.points, w, shape, sel) -
            oracle::count_f_rebuild(without, w, shape, sel);
        REQUIRE(incremental == oracle_diff);
        ++done;
    }
}

TEST_CASE("difference operator invariants over randomized trials") {
    Rng rng(321321);
    int done = 0;
    while (done < 500) {
        const int dim = 1 + static_cast<int>(rng.below(2));
        const double h = rng.uniform(2.0, 5.0);
        const Window w = Window::box(dim, Point{h, h, h});
        const Shape shape = rng.u01() < 0.5
                                ? Shape::euclidean_ball(rng.uniform(0.2, 0.9), dim)
                                : Shape::sup_box(rng.uniform(0.2, 0.7), dim);
        const PackingResult pack = packing_constant(shape);
        REQUIRE(pack.value.has_value());
        const int c_s = *pack.value;
        PointConfig cfg = oracle::random_config(rng, dim, 150, w);
        const Selector sel = random_selector(rng, 5);
        const DiffOps ops(cfg, shape);
        const std::int64_t f = ops.count_f(sel);

        // add-one costs at random probes plus pair midpoints (merge stress)
        for (int probe = 0; probe < 8; ++probe) {
            Point x{0, 0, 0};
            if (probe >= 6 && cfg.points.size() >= 2) {
                const auto& a = cfg.points[rng.below(cfg.points.size())];
                const auto& b = cfg.points[rng.below(cfg.points.size())];
                for (int d = 0; d < dim; ++d) x[d] = 0.5 * (a[d] + b[d]);
            } else {
                for (int d = 0; d < dim; ++d) x[d] = rng.uniform(-h, h);
            }
            std::int64_t cost;
            try {
                cost = ops.add_one_cost(sel, x);
            } catch (const validation_error&) {
                continue;
            }
            CHECK(cost >= -c_s);            // negative part bounded by c_S
            CHECK(std::llabs(cost) <= c_s); // |D F| <= c_S
            if (!ops.in_selected_support(sel, x)) CHECK(cost >= 0);
        }

        // remove-one costs over all vertices
        std::int64_t sum_plus_sq = 0;
        for (std::int32_t i = 0; i < static_cast<std::int32_t>(cfg.points.size());
             ++i) {
            const std::int64_t cost = ops.remove_one_cost(sel, i);
            CHECK(cost <= 1); // positive part at most one
            CHECK(std::llabs(cost) <= c_s);
            if (cost == 1) {
                // the removed vertex must lie in a selector-matching component
                const std::int32_t comp = ops.component_of(i);
                CHECK(ops.match(sel, ops.component_members(comp)) == 1);
            }
            if (cost > 0) sum_plus_sq += cost * cost;
        }
        CHECK(sum_plus_sq <= static_cast<std::int64_t>(sel.k) * f);
        ++done;
    }
}

TEST_CASE("census invariants") {
    Rng rng(2468);
    const Window w = Window::box(2, Point{6, 6, 0});
    PointConfig cfg = oracle::random_config(rng, 2, 300, w);
    const GeomGraph g = build_graph(cfg, Shape::euclidean_ball(0.5, 2));
    const ComponentCensus cs = census(g, 4);
    CHECK(cs.total_components == static_cast<std::int64_t>(g.component_count()));
    std::map<int, std::int64_t> by_size_from_iso;
    for (const auto& [key, n] : cs.counts_by_isoclass) by_size_from_iso[key.first] += n;
    for (const auto& [size, n] : by_size_from_iso)
        CHECK(n == cs.counts_by_size.at(size));
    std::int64_t total_pts = 0;
    for (const auto& [size, n] : cs.counts_by_size) total_pts += std::int64_t(size) * n;
    CHECK(total_pts == static_cast<std::int64_t>(cfg.points.size()));
}

TEST_CASE("bounded census equals the full census for small sizes") {
    Rng rng(1357);
    for (int trial = 0; trial < 25; ++trial) {
        const int dim = 1 + static_cast<int>(rng.below(2));
        const double h = rng.uniform(3.0, 7.0);
        const bool torus = rng.u01() < 0.3;
        const Window w = torus ? Window::torus(dim, Point{h, h, h})
                               : Window::box(dim, Point{h, h, h});
        const Shape shape = Shape::euclidean_ball(rng.uniform(0.3, 1.0), dim);
        if (torus && shape.reach() > h) continue;
        PointConfig cfg = oracle::random_config(rng, dim, 400, w);
        const GeomGraph g = build_graph(cfg, shape);

        std::vector<Selector> sels{Selector::exactly(1), Selector::exactly(3),
                                   Selector::at_most(4),
                                   Selector::iso(oracle::path_graph(3))};
        const SmallCompCounts counts =
            count_small_components(cfg.points, w, shape, sels, true);
        for (std::size_t s = 0; s < sels.size(); ++s)
            CHECK(counts.raw[s] == count_f(g, sels[s]));
        CHECK(counts.edges == static_cast<std::int64_t>(g.edge_count()));
    }
}

TEST_CASE("eroded census only keeps components away from the boundary") {
    const Window w = Window::box(2, Point{5, 5, 0});
    const Shape shape = Shape::euclidean_ball(1.0, 2);
    const std::vector<Point> pts{Point{4.5, 0, 0}, Point{0, 0, 0}};
    std::vector<Selector> sels{Selector::exactly(1)};
    const SmallCompCounts counts = count_small_components(pts, w, shape, sels, false);
    CHECK(counts.raw[0] == 2);
    CHECK(counts.eroded[0] == 1); // margin k theta rho = 1
}
