#ifndef GEOMCONC_COMPONENTS_HPP
#define GEOMCONC_COMPONENTS_HPP

// Component-count functionals: the selector algebra for admissible
// components, canonical forms for isomorphism tests, the counts F and U,
// and the add-one / remove-one cost difference operators.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "geomconc/geometry.hpp"

namespace geomconc {

// Adjacency of a graph on k <= 10 vertices packed as upper-triangle bits,
// row-major: bit of (i, j), i < j, at index i*k - i*(i+1)/2 + (j-i-1).
using GraphBits = std::uint64_t;

inline int triangle_bit_index(int k, int i, int j) {
    return i * k - i * (i + 1) / 2 + (j - i - 1);
}

GraphBits graph_bits_from_matrix(const std::vector<std::vector<int>>& adj);
bool graph_bits_connected(int k, GraphBits bits);
// sorted degree multiset packed into one word; an isomorphism invariant
std::uint64_t graph_degree_key(int k, GraphBits bits);

// Minimum upper-triangle code over all vertex relabelings (within degree
// classes, with prefix pruning). Equal codes iff isomorphic.
GraphBits canonical_form(int k, GraphBits bits);

enum class SelectorKind { at_most_k, exactly_k, iso_to_h };

struct Selector {
    SelectorKind kind = SelectorKind::at_most_k;
    int k = 1;
    GraphBits h_code = 0;           // canonical code of H (iso variant)
    std::uint64_t h_degree_key = 0; // sorted degree multiset of H (prefilter)
    std::string h_bits_raw;         // upper-triangle bit string as given

    static Selector at_most(int k);
    static Selector exactly(int k);
    static Selector iso(const std::vector<std::vector<int>>& h_adjacency);
    static Selector iso_from_bits(int k, const std::string& upper_triangle_bits);

    bool needs_iso() const { return kind == SelectorKind::iso_to_h; }
    bool fixed_size() const { return kind != SelectorKind::at_most_k; }
    // does a component of this size possibly match (independent of structure)?
    bool size_admissible(int size) const {
        return kind == SelectorKind::at_most_k ? size <= k : size == k;
    }
};

struct ComponentCensus {
    std::map<int, std::int64_t> counts_by_size;
    std::map<std::pair<int, GraphBits>, std::int64_t> counts_by_isoclass; // sizes <= depth
    std::int64_t total_components = 0;
    int iso_depth = 0;
};

ComponentCensus census(const GeomGraph& graph, int iso_depth);

// F_S^A: number of components whose vertex set satisfies the selector.
std::int64_t count_f(const GeomGraph& graph, const Selector& selector);

// U_S^A: ordered k-tuples of distinct points, connected in G_S and in A;
// equals k! times the number of connected induced k-subsets matching the
// selector. Components larger than `component_cap` make the subset
// enumeration infeasible (k = 2 reduces to edge counting and never errors).
std::int64_t count_u(const GeomGraph& graph, const Selector& selector,
                     int component_cap = 40);

// D_x F(xi) = F(xi + x) - F(xi), exact, by incremental insertion.
std::int64_t add_one_cost(const PointConfig& config, const Shape& shape,
                          const Selector& selector, const Point& x);

// F(xi) - F(xi - x_index) = D_x F(xi - delta_x), exact.
std::int64_t remove_one_cost(const PointConfig& config, const Shape& shape,
                             const Selector& selector, std::int32_t index);

// ---------------------------------------------------------------------------
// Batched evaluation over one fixed configuration. Builds the grid and the
// component partition once; used by the condition checker and the tests.
class DiffOps {
public:
    DiffOps(const PointConfig& config, const Shape& shape);

    std::int64_t count_f(const Selector& selector) const;
    std::int64_t add_one_cost(const Selector& selector, const Point& x) const;
    std::int64_t remove_one_cost(const Selector& selector, std::int32_t index) const;

    // true when x lies in union of (S+y) over vertices y of selector-matching
    // components; the negative part of the add-one cost is supported there.
    bool in_selected_support(const Selector& selector, const Point& x) const;

    std::int32_t component_of(std::int32_t index) const { return comp_id_[index]; }
    int component_size(std::int32_t comp) const { return static_cast<int>(members_[comp].size()); }
    std::int64_t component_count() const { return static_cast<std::int64_t>(members_.size()); }
    const std::vector<std::int32_t>& component_members(std::int32_t comp) const {
        return members_[comp];
    }
    const NeighborGrid& grid() const { return grid_; }
    const PointConfig& config() const { return *config_; }
    const Shape& shape() const { return shape_; }

    // 1 if the component matches the selector, else 0
    int match(const Selector& selector, const std::vector<std::int32_t>& member_indices,
              const Point* extra = nullptr) const;

private:
    const PointConfig* config_;
    Shape shape_;
    NeighborGrid grid_;
    std::vector<std::int32_t> comp_id_;
    std::vector<std::vector<std::int32_t>> members_;
};

// ---------------------------------------------------------------------------
// Streaming census for experiment loops: counts only components of size
// <= depth via bounded exploration (large components are abandoned as soon
// as they exceed depth), never materializing adjacency. Raw counts include
// every component; eroded counts keep components fully inside the window
// shrunk by k*theta*rho.
struct SmallCompCounts {
    std::vector<std::int64_t> raw;    // per selector
    std::vector<std::int64_t> eroded; // per selector
    std::int64_t edges = 0;           // filled when count_edges is requested
};

SmallCompCounts count_small_components(const std::vector<Point>& points,
                                       const Window& window, const Shape& shape,
                                       std::span<const Selector> selectors,
                                       bool count_edges = false);

} // namespace geomconc

#endif
