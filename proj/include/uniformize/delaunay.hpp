#pragma once

#include "uniformize/penner.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace uniformize {

/// The local Delaunay margin at an edge split into the part carried by
/// decorated vertices and the part carried by undecorated ones.  Missing
/// horocycles contribute zero to `decorated`; `undecorated` is the margin the
/// same arcs give when every missing horocycle is put back at one common
/// (arbitrarily small) size, which breaks ties exactly as a large finite shift
/// would.  Both values are normalized by their largest term; `scale` is the sum
/// of absolute normalized terms (zero when a level has no terms).
struct MarginParts {
    double decorated = 0, decorated_scale = 0, decorated_log_unit = 0;
    double undecorated = 0, undecorated_scale = 0, undecorated_log_unit = 0;
};

MarginParts margin_parts(const Triangulation& T, const std::vector<double>& lambda,
                         const PartialDecoration& u, int e);

/// (beta+beta')e^{-u_b} + (gamma+gamma')e^{-u_c} - alpha e^{-u_a} - alpha' e^{-u_a'}
/// with e^{-inf} = 0.  Nonnegative means locally Delaunay.
double delaunay_margin(const DecoratedMetric& M, const PartialDecoration& u, int e);

enum class EdgeStatus { Strict, Nonessential, Violating };

EdgeStatus edge_status(const MarginParts& p, double tol);

enum class DelaunayMode { Plain, Adjusted };

struct DelaunayOptions {
    double tolerance = 1e-9;        // relative to the local arc scale
    std::optional<long> max_flips;  // default 1000 |E| + 10000
};

struct FlipRecord {
    int edge;
    double lambda_before;
    double lambda_after;
};

struct DelaunayResult {
    /// The Delaunay triangulation with the input's lambda carried along by
    /// Ptolemy flips (same decoration as the input, not shifted by u).
    DecoratedMetric metric;
    PartialDecoration u;
    /// metric.lambda shifted by u; +inf on edges that touch a missing horocycle.
    std::vector<double> lambda_tilde;
    std::vector<FlipRecord> flips;
    std::vector<int> nonessential;
    /// Per vertex: the triangles around it if its horocycle is missing, else empty.
    std::vector<std::vector<int>> punctured_faces;
};

DelaunayResult make_delaunay(const DecoratedMetric& M, const PartialDecoration& u, DelaunayMode mode,
                             const DelaunayOptions& opts = {});

struct DelaunayCheck {
    bool ok = true;
    std::vector<std::pair<int, double>> violations; // edge, margin at the deciding level
    std::vector<int> nonessential;
};

DelaunayCheck check_delaunay(const DecoratedMetric& M, const PartialDecoration& u, double tol = 1e-9);

bool triangle_inequality_check(const DecoratedMetric& M);

struct CrossCheck {
    bool consistent = true;
    std::vector<int> mismatches;
    std::vector<double> cot_weight; // cot alpha + cot alpha' per edge
    std::vector<double> margin;     // normalized ideal margin per edge (u = 0)
};

/// Compares the sign of the euclidean cotangent weight with the ideal margin on
/// every edge.  Throws TriangleInequalityViolated if the metric is not euclidean.
CrossCheck euclidean_delaunay_crosscheck(const DecoratedMetric& M, double tol = 1e-9);

/// delta(v, target) for every v != target (entry for target is NaN), from a single
/// adjusted Delaunay run with only the horocycle at target present.
std::vector<double> horocycle_distances_to(const DecoratedMetric& M, int target);

double horocycle_distance(const DecoratedMetric& M, int v1, int v2);

} // namespace uniformize
