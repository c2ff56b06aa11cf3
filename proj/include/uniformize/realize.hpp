#pragma once

#include "uniformize/optimize.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <vector>

namespace uniformize {

enum class RealizableKind { TwoSided, Polyhedral };

const char* realizable_kind_name(RealizableKind k);

/// Tolerance on angle-sum conditions when classifying a minimizer.
inline constexpr double kAngleTolerance = 1e-8;

/// Classifies the adjusted Delaunay data at a minimizer of the constrained
/// problem.  Throws NotRealizable naming the first vertex that violates a
/// condition.
RealizableKind classify_realizable(const DelaunayResult& D, int vinf, double tol = kAngleTolerance);

/// Triangles unfolded into the plane, one copy per triangle.
struct PlanarLayout {
    std::vector<std::array<Eigen::Vector2d, 3>> corner; // per triangle, by corner index
    std::vector<char> placed;                           // per triangle
    std::vector<Eigen::Vector2d> vertex;                // first placement of each vertex
    std::vector<char> vertex_placed;
    std::vector<int> tree_edges;  // edges crossed while unfolding
    int seed_triangle = -1;
    double length_scale = 1;      // layout length = length_scale * exp(lambda_tilde / 2)
    double diameter = 0;
    double closure_residual = 0;  // largest corner-to-vertex mismatch
    double max_length_error = 0;  // largest relative side-length error
};

/// Breadth-first unfolding of the triangles in `kept` (all when null) with side
/// lengths exp(lambda/2), starting from the largest triangle.  Positions are not
/// checked for closure; see layout_disk.
PlanarLayout unfold_triangles(const Triangulation& T, const std::vector<double>& lambda,
                              const std::vector<char>* kept = nullptr);

/// Lays out the disk that avoids vinf.  Throws LayoutInconsistent when a vertex
/// star does not close up within 1e-8 of the diameter.
PlanarLayout layout_disk(const DelaunayResult& D, int vinf);

enum class RealizationKind { InscribedPolyhedron, TwoSidedPolygon, FlatTorus, ConeMetric };

const char* realization_kind_name(RealizationKind k);

struct Realization {
    RealizationKind kind = RealizationKind::ConeMetric;
    std::vector<Eigen::Vector3d> points;   // on the unit sphere (sphere kinds)
    std::vector<Eigen::Vector2d> planar;   // layout positions (torus, polyhedron before projection)
    std::vector<std::vector<int>> faces;   // vertex cycles

    // Certification of sphere kinds.
    double sphere_residual = 0;   // max | |p| - 1 |
    double planarity = 0;         // max distance of a face vertex to its face plane
    double convexity_margin = 0;  // min clearance of other vertices from face planes

    // Flat torus.
    Eigen::Vector2d omega1 = Eigen::Vector2d::Zero(), omega2 = Eigen::Vector2d::Zero();
    std::complex<double> tau;
    double deck_residual = 0;

    /// Final triangulation.  Torus and cone kinds carry the flat lambda; sphere
    /// kinds carry the decorated lambda and put the limit coordinates, which are
    /// infinite on edges at vinf, in lambda_tilde.
    std::optional<DecoratedMetric> metric;
    std::vector<double> lambda_tilde;
    std::vector<double> theta_tilde;
    std::optional<SolveReport> solve;
};

/// Inscribed convex polyhedron from a disk layout: planar points go to the unit
/// sphere by inverse stereographic projection from the north pole, vinf to the
/// pole.  Faces merge triangles across nonessential edges.  Throws WrongKind for
/// two-sided data and ConvexityViolated when certification fails.
Realization polyhedron_from_layout(const PlanarLayout& L, const DelaunayResult& D, int vinf);

/// Degenerate realization: the vertices on a great circle through the pole.
Realization two_sided_polygon(const DelaunayResult& D, int vinf);

/// Full pipeline for a sphere: constrained minimization, classification, and
/// the matching realization.
Realization uniformize_sphere(const DecoratedMetric& M, int vinf, const SolveOptions& opts = {});

/// Flat metric in the conformal class of a torus, its lattice and modulus.
Realization uniformize_torus(const DecoratedMetric& M, const SolveOptions& opts = {});

/// Metric with prescribed cone angles in the conformal class of M.
Realization prescribe_cone_angles(const DecoratedMetric& M, const ConeAngleTarget& theta,
                                  const SolveOptions& opts = {});

/// |p - r| |q - s| / (|p - s| |q - r|) with chordal distances.
double absolute_cross_ratio(const Eigen::Vector3d& p, const Eigen::Vector3d& q, const Eigen::Vector3d& r,
                            const Eigen::Vector3d& s);

/// Lagrange-reduces a lattice basis and returns tau = omega2 / omega1 in the
/// standard fundamental domain.  The basis is rotated so omega1 is on the
/// positive real axis and scaled to unit covolume.
std::complex<double> reduce_lattice(Eigen::Vector2d& omega1, Eigen::Vector2d& omega2);

} // namespace uniformize
