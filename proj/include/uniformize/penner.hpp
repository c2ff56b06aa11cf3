#pragma once

#include "uniformize/mesh.hpp"

#include <array>
#include <vector>

namespace uniformize {

/// A triangulation with Penner coordinates: lambda per edge (log scale).
/// The euclidean edge length is ell = exp(lambda / 2).
struct DecoratedMetric {
    Triangulation tri;
    std::vector<double> lambda;

    double ell(int e) const;
};

/// Checks sizes and finiteness.
DecoratedMetric make_metric(Triangulation tri, std::vector<double> lambda);

/// Per-vertex shift in R + {+inf}.  A missing horocycle is flagged, not stored
/// as a large number.
struct PartialDecoration {
    std::vector<double> value;
    std::vector<char> missing;

    static PartialDecoration finite(std::vector<double> u);
    /// Zero at the given vertex, missing everywhere else.
    static PartialDecoration only(int num_vertices, int v, double value = 0.0);

    int size() const { return static_cast<int>(value.size()); }
    bool decorated(int v) const { return !missing[v]; }
};

struct ConeAngleTarget {
    std::vector<double> theta;
};

struct ShearCoordinates {
    Triangulation tri;
    std::vector<double> sigma;
};

/// Arc lengths at the corners opposite sides 1, 2, 3 of a decorated triangle.
std::array<double, 3> arc_lengths(const std::array<double, 3>& lambda);
/// Inverse of arc_lengths.
std::array<double, 3> lambda_from_arcs(const std::array<double, 3>& alpha);

/// log of the horocyclic arc at corner c (the corner at tail(c) of its triangle).
double corner_log_arc(const Triangulation& T, const std::vector<double>& lambda, int c);

double horocycle_length(const DecoratedMetric& M, int v);
/// log c_v evaluated with a log-sum-exp, safe for large |lambda|.
double log_horocycle_length(const DecoratedMetric& M, int v);

DecoratedMetric fiber_shift(const DecoratedMetric& M, const std::vector<double>& u);

/// Shear along e: log of the ratio of the arc after crossing e to the arc before,
/// walking around either endpoint in corner-cycle order.
ShearCoordinates shear_from_penner(const DecoratedMetric& M);

/// anchor_arcs[v] is the arc length at the corner Triangulation::some_corner(v).
DecoratedMetric penner_from_shear(const ShearCoordinates& S, const std::vector<double>& anchor_arcs);

/// lambda of the new diagonal: 2 log(exp((la+lc)/2) + exp((lb+ld)/2)) - le,
/// where a, c and b, d are pairs of opposite quadrilateral sides.
double ptolemy_update(double la, double lb, double lc, double ld, double le);

/// The four sides of the quadrilateral around e, as halfedges of the current
/// triangulation, in the cyclic order used by flip_in_place: a->d, d->b, b->c, c->a,
/// where e runs from a to b.
std::array<int, 4> quad_sides(const Triangulation& T, int e);

/// Flip e and update lambda by Ptolemy.  Returns the new lambda of e.
double ptolemy_flip(Triangulation& T, std::vector<double>& lambda, int e);

} // namespace uniformize
