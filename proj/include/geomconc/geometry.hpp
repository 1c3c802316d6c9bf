#ifndef GEOMCONC_GEOMETRY_HPP
#define GEOMCONC_GEOMETRY_HPP

// Geometric graph machinery: fixed-radius neighbor search on a uniform
// grid, graph construction with connected components, the packing constant
// c_S, and Lebesgue volumes of unions of shape translates.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "geomconc/intensity.hpp"
#include "geomconc/shape.hpp"

namespace geomconc {

// Uniform-grid index over a point set. Cell side >= theta*rho so that every
// S-neighbor of a point lies in the 3^d surrounding cells. Memory stays
// O(n): points are sorted by cell id and cells are located by binary search.
class NeighborGrid {
public:
    NeighborGrid(const std::vector<Point>& points, int dim, double cell_size,
                 const Window& window);

    // Applies fn(j) to every point j whose cell is within one cell of x's.
    template <class Fn>
    void for_candidates(const Point& x, Fn&& fn) const {
        std::int64_t axis_cells[kMaxDim][3];
        int axis_count[kMaxDim];
        neighbor_axes(x, axis_cells, axis_count);
        std::int64_t idx[kMaxDim] = {0, 0, 0};
        visit_axes(0, axis_cells, axis_count, idx, fn);
    }

    // Difference a - b, wrapped per axis for torus windows.
    Point wrapped_diff(const Point& a, const Point& b) const;

    int dim() const { return dim_; }
    bool torus() const { return torus_; }

private:
    template <class Fn>
    void visit_axes(int axis, std::int64_t cells[][3], const int* count,
                    std::int64_t* idx, Fn&& fn) const {
        if (axis == dim_) {
            visit_cell(cell_id_from_idx(idx), fn);
            return;
        }
        for (int i = 0; i < count[axis]; ++i) {
            idx[axis] = cells[axis][i];
            visit_axes(axis + 1, cells, count, idx, fn);
        }
    }

    template <class Fn>
    void visit_cell(std::int64_t id, Fn&& fn) const {
        auto lo = std::lower_bound(cell_of_.begin(), cell_of_.end(), id);
        for (auto it = lo; it != cell_of_.end() && *it == id; ++it)
            fn(order_[static_cast<std::size_t>(it - cell_of_.begin())]);
    }

    void neighbor_axes(const Point& x, std::int64_t cells[][3], int* count) const;
    std::int64_t cell_id_from_idx(const std::int64_t* idx) const;
    std::int64_t cell_index_axis(double coord, int axis) const;

    const std::vector<Point>* points_;
    int dim_;
    bool torus_;
    Point origin_{};
    double wrap_len_[kMaxDim] = {0, 0, 0};
    double cell_[kMaxDim] = {0, 0, 0};
    std::int64_t ncells_[kMaxDim] = {1, 1, 1};
    std::vector<std::int64_t> cell_of_; // sorted cell id per position
    std::vector<std::int32_t> order_;   // point index per position
};

struct GeomGraph {
    PointConfig config;
    Shape shape;
    std::vector<std::vector<std::int32_t>> adjacency; // sorted neighbor lists
    std::vector<std::int32_t> component_id;           // dense ids, 0-based
    std::vector<std::int32_t> component_sizes;        // indexed by component id

    std::size_t vertex_count() const { return config.points.size(); }
    std::size_t component_count() const { return component_sizes.size(); }
    std::size_t edge_count() const;
};

// Exact geometric graph; adjacency equals the brute-force pairwise rule.
GeomGraph build_graph(const PointConfig& config, const Shape& shape);

// Recomputes the component partition of an existing graph (union-find).
void connected_components(GeomGraph& graph);

struct PackingResult {
    int lower_bound = 1;           // certified by an explicit configuration
    std::optional<int> value;      // exact value where known
    bool certified() const { return value.has_value(); }
    int usable(std::optional<int> override_value = std::nullopt) const {
        if (value) return *value;
        if (override_value) return std::max(*override_value, lower_bound);
        return lower_bound;
    }
};

// Largest number of points of S with pairwise differences outside S.
// Known exactly for the Euclidean ball in d <= 2 and the sup-norm box in
// d <= 3; otherwise only the searched lower bound is certified.
PackingResult packing_constant(const Shape& shape);

struct UnionVolume {
    double value = 0.0;
    double std_error = 0.0; // 0 for exact paths
    bool exact = true;
};

// Volume of S union (S+x2) union ... union (S+xk); offsets holds x2..xk.
// Exact for k = 1, for d = 1, for the sup norm (inclusion-exclusion), and
// for Euclidean pairs in d = 2, 3; otherwise hit-or-miss Monte Carlo with
// the requested relative standard error.
UnionVolume union_volume(const Shape& shape, const std::vector<Point>& offsets,
                         double rel_se_target = 1e-3, std::uint64_t seed = 0x9E3779B9ULL);

// Exact area of the intersection of two disks of radius rho at center
// distance s (the lens), for d = 2.
double disk_lens_area(double rho, double s);

} // namespace geomconc

#endif
