#pragma once

#include "uniformize/delaunay.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <vector>

namespace uniformize {

enum class Exec { Serial, Parallel };

/// Per-triangle terms on a fixed triangulation: 2 f(lambda/2), the three angles
/// and their cotangents.  Triangles not selected by `kept` are left zero.
struct TriangleTerms {
    std::vector<double> two_f;
    std::vector<std::array<double, 3>> angle;
    std::vector<std::array<double, 3>> cot;
};

/// Reference implementation: one plain loop.
TriangleTerms triangle_terms_serial(const Triangulation& T, const std::vector<double>& lambda,
                                    const std::vector<char>* kept = nullptr);
/// OpenMP version; produces bit-identical output to the serial one.
TriangleTerms triangle_terms_parallel(const Triangulation& T, const std::vector<double>& lambda,
                                      const std::vector<char>* kept = nullptr);
TriangleTerms triangle_terms(const Triangulation& T, const std::vector<double>& lambda,
                             const std::vector<char>* kept, Exec exec);

struct EnergyOptions {
    Exec exec = Exec::Serial;
    DelaunayOptions delaunay;
    /// Optional starting triangulation for the flip algorithm.  It must carry the
    /// same decorated surface as the input metric (for example, the metric of an
    /// earlier DelaunayResult for the same input).
    const DecoratedMetric* warm_start = nullptr;
};

struct EnergyEvaluation {
    double value = 0;
    Eigen::VectorXd gradient;              // indexed like free_vertices
    Eigen::SparseMatrix<double> hessian;   // indexed like free_vertices
    std::vector<int> free_vertices;
    DelaunayResult delaunay;
    std::vector<double> theta_tilde;       // angle sum per vertex (0 at a removed vertex)
};

/// H_Theta on a fixed triangulation (requires every triangle to satisfy the
/// triangle inequality; throws OutsideDomainA otherwise).
double h_theta(const DecoratedMetric& M, const ConeAngleTarget& theta);

struct HThetaDerivatives {
    double value;
    Eigen::VectorXd gradient; // d/d lambda
    Eigen::MatrixXd hessian;  // dense, |E| x |E|
};

HThetaDerivatives h_theta_derivatives(const DecoratedMetric& M, const ConeAngleTarget& theta);

/// E_Theta(u): H_Theta evaluated on the Delaunay triangulation of the fiber shift.
EnergyEvaluation e_theta(const DecoratedMetric& M, const ConeAngleTarget& theta, const std::vector<double>& u,
                         const EnergyOptions& opts = {});

/// The limit energy with a missing horocycle at vinf.  u has one entry per vertex
/// other than vinf, in increasing vertex order.
EnergyEvaluation e_bar(const DecoratedMetric& M, int vinf, const std::vector<double>& u,
                       const EnergyOptions& opts = {});

/// Expand u on V minus vinf to a full partial decoration with vinf missing.
PartialDecoration decoration_without(int vinf, const std::vector<double>& u);

struct CrossFlipReport {
    double value_diff;
    double gradient_diff;
    double hessian_diff;
    double third_diff; // finite-difference third derivative mismatch (not expected to vanish)
};

/// Compares H_Theta and its first two derivatives in the charts before and after
/// flipping the nonessential edge e.  Throws NotNeutral if e is not cocircular.
CrossFlipReport crossflip_c2_check(const DecoratedMetric& M, const ConeAngleTarget& theta, int e,
                                   const Eigen::VectorXd* probe_direction = nullptr);

} // namespace uniformize
