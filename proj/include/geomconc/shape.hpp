#ifndef GEOMCONC_SHAPE_HPP
#define GEOMCONC_SHAPE_HPP

#include <cmath>

#include "geomconc/common.hpp"
#include "geomconc/quad.hpp"

namespace geomconc {

enum class Norm { euclidean, sup };

// The symmetric structuring set S: a closed norm ball of radius rho.
// Euclidean gives the classical disk graph (theta = 1); the sup-norm box
// rho*[-1,1]^d has circumradius theta*rho with theta = sqrt(d).
// Two points x, y are adjacent in G_S iff x - y lies in S (closed membership:
// a pair at distance exactly rho is an edge).
struct Shape {
    Norm norm = Norm::euclidean;
    double rho = 1.0;
    int dim = 2;

    static Shape euclidean_ball(double rho, int dim) {
        require(rho > 0.0, "shape.rho must be > 0");
        require(dim >= 1 && dim <= kMaxDim, "shape dimension must be 1, 2 or 3");
        return Shape{Norm::euclidean, rho, dim};
    }
    static Shape sup_box(double rho, int dim) {
        require(rho > 0.0, "shape.rho must be > 0");
        require(dim >= 1 && dim <= kMaxDim, "shape dimension must be 1, 2 or 3");
        return Shape{Norm::sup, rho, dim};
    }

    Shape scaled(double factor) const {
        Shape s = *this;
        s.rho = rho * factor;
        return s;
    }

    double theta() const { return norm == Norm::euclidean ? 1.0 : std::sqrt(double(dim)); }
    // circumradius theta*rho; all S-neighbors are within this distance
    double reach() const { return theta() * rho; }

    bool contains(const Point& diff) const {
        if (norm == Norm::euclidean) {
            double s2 = 0.0;
            for (int i = 0; i < dim; ++i) s2 += sq(diff[i]);
            return s2 <= rho * rho;
        }
        for (int i = 0; i < dim; ++i)
            if (std::fabs(diff[i]) > rho) return false;
        return true;
    }

    double volume() const {
        if (norm == Norm::euclidean) return quad::ball_volume(dim, rho);
        return std::pow(2.0 * rho, dim);
    }
};

} // namespace geomconc

#endif
