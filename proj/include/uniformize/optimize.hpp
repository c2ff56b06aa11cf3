#pragma once

#include "uniformize/energy.hpp"

#include <optional>
#include <string>
#include <vector>

namespace uniformize {

enum class Gauge { ZeroMean, PinVertex };

struct SolveOptions {
    double gradient_tolerance = 1e-10; // on the max norm of the (projected) gradient
    int max_iterations = 500;
    double shrink = 0.5;               // backtracking factor
    double sufficient_decrease = 1e-4; // Armijo constant
    int max_backtracks = 60;
    /// Largest allowed change of any u_v in one Newton step.
    double max_step = 5.0;
    Gauge gauge = Gauge::ZeroMean;
    int pin_vertex = 0;
    EnergyOptions energy;
    /// Starting point; defaults to 0 (E_Theta) or max(0, -delta) (constrained).
    std::optional<std::vector<double>> initial_u;
    /// Throw IterLimit / LineSearchFailure instead of returning the status.
    bool throw_on_failure = true;

    void validate() const;
};

enum class SolveStatus { Converged, IterLimit, LineSearchFailure };

const char* status_name(SolveStatus s);

struct KktReport {
    bool ok = false;
    double feasibility = 0;     // largest bound violation
    double stationarity = 0;    // largest |gradient| over free variables
    double complementarity = 0; // largest negative gradient at an active bound
    std::vector<int> active;    // vertex ids at their bound
    std::string failure;        // first failed condition, empty when ok

    double max_residual() const;
};

struct SolveReport {
    std::vector<double> u; // one entry per vertex (E_Theta) or per vertex of V minus vinf
    int iterations = 0;
    long flips_total = 0;
    std::vector<int> active_set; // vertex ids (constrained case)
    std::vector<double> lower_bounds;
    KktReport kkt;
    SolveStatus status = SolveStatus::Converged;
    bool regularized = false; // a Tikhonov shift was needed at some step
    double energy = 0;
    EnergyEvaluation final_evaluation;
};

/// Gauss-Bonnet residual sum(Theta) - 2 pi (n - chi).
double gauss_bonnet_residual(const Triangulation& T, const ConeAngleTarget& theta);

/// Newton's method for E_Theta with the scale gauge removed.
SolveReport minimize_e_theta(const DecoratedMetric& M, const ConeAngleTarget& theta, const SolveOptions& opts = {});

/// Projected Newton for the limit energy with lower bounds u_v >= -delta(v, vinf), the
/// horocycle at v staying outside the original horocycle at vinf.
SolveReport minimize_e_bar(const DecoratedMetric& M, int vinf, const SolveOptions& opts = {});

/// Optimality check for E_Theta (stationarity only).
KktReport kkt_check(const DecoratedMetric& M, const ConeAngleTarget& theta, const std::vector<double>& u,
                    double tol);

/// Optimality check for the constrained problem: feasibility, stationarity on
/// free variables, nonnegative gradient at active bounds, nonempty active set.
KktReport kkt_check(const DecoratedMetric& M, int vinf, const std::vector<double>& u, double tol);

} // namespace uniformize
