#include "uniformize/optimize.hpp"

#include "uniformize/errors.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace uniformize {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_abs(const Eigen::VectorXd& v)
{
    return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

struct LinearSolve {
    Eigen::VectorXd x;
    bool regularized = false;
    bool ok = true;
};

// Solves H[F,F] x = rhs for the index set F.  Falls back to a small diagonal
// shift when the factorization fails or has a vanishing pivot.
LinearSolve solve_restricted(const Eigen::SparseMatrix<double>& H, const std::vector<int>& F, const Eigen::VectorXd& rhs)
{
    const int m = static_cast<int>(F.size());
    LinearSolve out;
    out.x = Eigen::VectorXd::Zero(m);
    if (m == 0)
        return out;
    std::vector<int> pos(H.rows(), -1);
    for (int i = 0; i < m; ++i)
        pos[F[i]] = i;
    std::vector<Eigen::Triplet<double>> trip;
    double trace = 0.0;
    for (int k = 0; k < H.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(H, k); it; ++it) {
            const int r = pos[it.row()], c = pos[it.col()];
            if (r < 0 || c < 0)
                continue;
            trip.emplace_back(r, c, it.value());
            if (r == c)
                trace += it.value();
        }
    }
    Eigen::SparseMatrix<double> A(m, m);
    A.setFromTriplets(trip.begin(), trip.end());

    auto attempt = [&](const Eigen::SparseMatrix<double>& K) -> bool {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
        if (ldlt.info() != Eigen::Success)
            return false;
        const Eigen::VectorXd D = ldlt.vectorD();
        const double dmax = D.cwiseAbs().maxCoeff();
        if (!(dmax > 0) || D.minCoeff() <= 1e-13 * dmax)
            return false;
        out.x = ldlt.solve(rhs);
        return ldlt.info() == Eigen::Success && out.x.allFinite();
    };
    if (attempt(A))
        return out;
    out.regularized = true;
    const double shift = std::max(1e-10 * std::abs(trace) / m, 1e-10);
    Eigen::SparseMatrix<double> I(m, m);
    I.setIdentity();
    out.ok = attempt(A + shift * I);
    return out;
}

bool roundoff_acceptable(double e_old, double e_new, double g_old, double g_new)
{
    return e_new - e_old <= 1e-13 * (1.0 + std::abs(e_old)) && g_new < g_old;
}

void fail(SolveReport& rep, SolveStatus status, const SolveOptions& opts, const std::string& what)
{
    rep.status = status;
    if (!opts.throw_on_failure)
        return;
    throw Error(status == SolveStatus::IterLimit ? ErrorCode::IterLimit : ErrorCode::LineSearchFailure, what);
}

void apply_gauge(std::vector<double>& u, const SolveOptions& opts)
{
    if (u.empty())
        return;
    double shift = 0.0;
    if (opts.gauge == Gauge::PinVertex) {
        shift = u.at(opts.pin_vertex);
    } else {
        for (double x : u)
            shift += x;
        shift /= static_cast<double>(u.size());
    }
    for (double& x : u)
        x -= shift;
}

} // namespace

void SolveOptions::validate() const
{
    if (!(gradient_tolerance > 0) || !(sufficient_decrease > 0) || !(sufficient_decrease < 1) || !(max_step > 0))
        throw Error(ErrorCode::InvalidInput, "solver tolerances must be positive");
    if (!(shrink > 0 && shrink < 1))
        throw Error(ErrorCode::InvalidInput, "shrink factor must lie in (0, 1)");
    if (max_iterations < 0 || max_backtracks < 1)
        throw Error(ErrorCode::InvalidInput, "iteration limits must be positive");
}

const char* status_name(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Converged:
        return "Converged";
    case SolveStatus::IterLimit:
        return "IterLimit";
    case SolveStatus::LineSearchFailure:
        return "LineSearchFailure";
    }
    return "?";
}

double KktReport::max_residual() const
{
    return std::max({feasibility, stationarity, complementarity});
}

double gauss_bonnet_residual(const Triangulation& T, const ConeAngleTarget& theta)
{
    double s = 0.0;
    for (double x : theta.theta)
        s += x;
    return s - kTwoPi * (T.num_vertices() - T.euler_characteristic());
}

SolveReport minimize_e_theta(const DecoratedMetric& M, const ConeAngleTarget& theta, const SolveOptions& opts)
{
    opts.validate();
    const int n = M.tri.num_vertices();
    if (static_cast<int>(theta.theta.size()) != n)
        throw Error(ErrorCode::InvalidInput, "theta needs one value per vertex");
    for (double x : theta.theta)
        if (!(x >= 0) || !std::isfinite(x))
            throw Error(ErrorCode::InvalidInput, "cone angles must be finite and nonnegative");
    const double gb = gauss_bonnet_residual(M.tri, theta);
    if (std::abs(gb) > 1e-8)
        throw Error(ErrorCode::GaussBonnetViolated,
                    "sum of cone angles misses 2 pi (n - chi) by " + std::to_string(gb));
    if (opts.gauge == Gauge::PinVertex && (opts.pin_vertex < 0 || opts.pin_vertex >= n))
        throw Error(ErrorCode::UnknownVertex, "pinned vertex " + std::to_string(opts.pin_vertex));

    std::vector<double> u = opts.initial_u.value_or(std::vector<double>(n, 0.0));
    if (static_cast<int>(u.size()) != n)
        throw Error(ErrorCode::InvalidInput, "initial u needs one value per vertex");
    apply_gauge(u, opts);

    SolveReport rep;
    EnergyOptions eopts = opts.energy;
    EnergyEvaluation ev = e_theta(M, theta, u, eopts);
    rep.flips_total += static_cast<long>(ev.delaunay.flips.size());

    // The scale direction must be neutral; anything else means the energy and
    // the Gauss-Bonnet arithmetic disagree.
    {
        std::vector<double> shifted = u;
        for (double& x : shifted)
            x += 1.0;
        eopts.warm_start = &ev.delaunay.metric;
        const EnergyEvaluation probe = e_theta(M, theta, shifted, eopts);
        const double drift = probe.value - ev.value;
        if (std::abs(drift) > 1e-10 * (1.0 + std::abs(ev.value)) + std::abs(gb))
            throw Error(ErrorCode::InternalInconsistency,
                        "energy is not invariant under u -> u + 1 (change " + std::to_string(drift) + ")");
    }

    // Reduced system: drop one vertex, then restore the gauge.
    std::vector<int> F;
    for (int v = 0; v < n - 1; ++v)
        F.push_back(v);

    while (true) {
        const double gnorm = max_abs(ev.gradient);
        if (gnorm <= opts.gradient_tolerance)
            break;
        if (rep.iterations >= opts.max_iterations) {
            fail(rep, SolveStatus::IterLimit, opts, "no convergence after " + std::to_string(rep.iterations) +
                                                        " Newton steps (|grad| = " + std::to_string(gnorm) + ")");
            break;
        }
        ++rep.iterations;

        Eigen::VectorXd rhs(n - 1);
        for (int i = 0; i < n - 1; ++i)
            rhs[i] = -ev.gradient[F[i]];
        const LinearSolve ls = solve_restricted(ev.hessian, F, rhs);
        rep.regularized |= ls.regularized;
        Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
        if (ls.ok) {
            for (int i = 0; i < n - 1; ++i)
                d[F[i]] = ls.x[i];
        } else {
            d = -ev.gradient;
        }
        d.array() -= d.mean();
        double slope = ev.gradient.dot(d);
        if (!(slope < 0)) {
            d = -ev.gradient;
            d.array() -= d.mean();
            slope = ev.gradient.dot(d);
        }
        const double dmax = max_abs(d);
        if (dmax > opts.max_step)
            d *= opts.max_step / dmax;
        slope = ev.gradient.dot(d);

        eopts.warm_start = &ev.delaunay.metric;
        bool accepted = false;
        double t = 1.0;
        for (int k = 0; k < opts.max_backtracks; ++k, t *= opts.shrink) {
            std::vector<double> trial(u);
            for (int v = 0; v < n; ++v)
                trial[v] += t * d[v];
            EnergyEvaluation next = e_theta(M, theta, trial, eopts);
            if (next.value <= ev.value + opts.sufficient_decrease * t * slope ||
                roundoff_acceptable(ev.value, next.value, gnorm, max_abs(next.gradient))) {
                rep.flips_total += static_cast<long>(next.delaunay.flips.size());
                u = std::move(trial);
                ev = std::move(next);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            fail(rep, SolveStatus::LineSearchFailure, opts,
                 "backtracking found no decrease (|grad| = " + std::to_string(gnorm) + ")");
            break;
        }
    }

    apply_gauge(u, opts);
    eopts.warm_start = &ev.delaunay.metric;
    ev = e_theta(M, theta, u, eopts);
    rep.u = u;
    rep.energy = ev.value;
    rep.kkt.stationarity = max_abs(ev.gradient);
    rep.kkt.ok = rep.kkt.stationarity <= opts.gradient_tolerance;
    if (!rep.kkt.ok)
        rep.kkt.failure = "stationarity";
    rep.final_evaluation = std::move(ev);
    return rep;
}

namespace {

bool at_bound(double u, double lb)
{
    return u - lb <= 1e-12 * (1.0 + std::abs(lb));
}

// Gradient with the outward-pushing components at the bound removed.
double projected_gradient_norm(const std::vector<double>& u, const std::vector<double>& lb, const Eigen::VectorXd& g)
{
    double r = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double gi = g[static_cast<int>(i)];
        if (at_bound(u[i], lb[i]) && gi > 0)
            continue;
        r = std::max(r, std::abs(gi));
    }
    return r;
}

KktReport kkt_from(const std::vector<double>& u, const std::vector<double>& lb, const Eigen::VectorXd& g,
                   const std::vector<int>& vertex_of, double tol)
{
    KktReport k;
    for (std::size_t i = 0; i < u.size(); ++i) {
        k.feasibility = std::max(k.feasibility, lb[i] - u[i]);
        if (at_bound(u[i], lb[i])) {
            k.active.push_back(vertex_of[i]);
            k.complementarity = std::max(k.complementarity, -g[i]);
        } else {
            k.stationarity = std::max(k.stationarity, std::abs(g[i]));
        }
    }
    if (k.feasibility > tol)
        k.failure = "feasibility";
    else if (k.stationarity > tol)
        k.failure = "stationarity";
    else if (k.complementarity > tol)
        k.failure = "complementarity";
    else if (k.active.empty())
        k.failure = "empty active set";
    k.ok = k.failure.empty();
    return k;
}

// Moving the horocycle at v by u_v toward its cusp changes its distance to the
// fixed horocycle at vinf from delta to delta + u_v, so staying disjoint means
// u_v >= -delta.
std::vector<double> lower_bounds(const DecoratedMetric& M, int vinf)
{
    const std::vector<double> delta = horocycle_distances_to(M, vinf);
    std::vector<double> lb;
    for (int v = 0; v < M.tri.num_vertices(); ++v)
        if (v != vinf)
            lb.push_back(-delta[v]);
    return lb;
}

} // namespace

SolveReport minimize_e_bar(const DecoratedMetric& M, int vinf, const SolveOptions& opts)
{
    opts.validate();
    const int n = M.tri.num_vertices();
    if (M.tri.genus() != 0)
        throw Error(ErrorCode::WrongGenus, "the constrained problem needs a sphere, got genus " +
                                               std::to_string(M.tri.genus()));
    if (n < 3)
        throw Error(ErrorCode::InvalidInput, "need at least three vertices");
    if (vinf < 0 || vinf >= n)
        throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(vinf));

    const int m = n - 1;
    SolveReport rep;
    rep.lower_bounds = lower_bounds(M, vinf);
    const std::vector<double>& lb = rep.lower_bounds;
    std::vector<int> vertex_of;
    for (int v = 0; v < n; ++v)
        if (v != vinf)
            vertex_of.push_back(v);

    std::vector<double> u(m);
    if (opts.initial_u) {
        u = *opts.initial_u;
        if (static_cast<int>(u.size()) != m)
            throw Error(ErrorCode::InvalidInput, "initial u needs one value per vertex other than vinf");
        for (int i = 0; i < m; ++i)
            if (u[i] < lb[i] - 1e-12 * (1.0 + std::abs(lb[i])))
                throw Error(ErrorCode::InvalidInput, "initial u is below the bound at vertex " +
                                                         std::to_string(vertex_of[i]));
    } else {
        for (int i = 0; i < m; ++i)
            u[i] = std::max(0.0, lb[i]);
    }
    for (int i = 0; i < m; ++i)
        u[i] = std::max(u[i], lb[i]);

    EnergyOptions eopts = opts.energy;
    EnergyEvaluation ev = e_bar(M, vinf, u, eopts);
    rep.flips_total += static_cast<long>(ev.delaunay.flips.size());

    while (true) {
        const KktReport k = kkt_from(u, lb, ev.gradient, vertex_of, opts.gradient_tolerance);
        if (k.ok)
            break;
        if (rep.iterations >= opts.max_iterations) {
            fail(rep, SolveStatus::IterLimit, opts,
                 "no convergence after " + std::to_string(rep.iterations) + " steps (" + k.failure + " residual " +
                     std::to_string(k.max_residual()) + ")");
            break;
        }
        ++rep.iterations;
        eopts.warm_start = &ev.delaunay.metric;

        // With no bound active, lowering every u by the same amount decreases the
        // energy linearly, so jump straight to the nearest bound.
        int nearest = 0;
        for (int i = 1; i < m; ++i)
            if (u[i] - lb[i] < u[nearest] - lb[nearest])
                nearest = i;
        if (!at_bound(u[nearest], lb[nearest])) {
            const double h = u[nearest] - lb[nearest];
            for (int i = 0; i < m; ++i)
                u[i] = std::max(u[i] - h, lb[i]);
            u[nearest] = lb[nearest];
            ev = e_bar(M, vinf, u, eopts);
            rep.flips_total += static_cast<long>(ev.delaunay.flips.size());
            continue;
        }

        // Freeze variables at their bound whose gradient pushes outward.  If none
        // qualifies, freeze the bound variable with the largest gradient: the
        // Hessian always contains the all-ones direction in its kernel.
        std::vector<char> frozen(m, 0);
        int best = -1;
        bool any = false;
        for (int i = 0; i < m; ++i) {
            if (!at_bound(u[i], lb[i]))
                continue;
            if (ev.gradient[i] >= 0) {
                frozen[i] = 1;
                any = true;
            }
            if (best < 0 || ev.gradient[i] > ev.gradient[best])
                best = i;
        }
        if (!any)
            frozen[best] = 1;

        Eigen::VectorXd d = Eigen::VectorXd::Zero(m);
        for (int round = 0; round <= m; ++round) {
            std::vector<int> F;
            for (int i = 0; i < m; ++i)
                if (!frozen[i])
                    F.push_back(i);
            Eigen::VectorXd rhs(static_cast<int>(F.size()));
            for (std::size_t j = 0; j < F.size(); ++j)
                rhs[static_cast<int>(j)] = -ev.gradient[F[j]];
            const LinearSolve ls = solve_restricted(ev.hessian, F, rhs);
            rep.regularized |= ls.regularized;
            d.setZero();
            for (std::size_t j = 0; j < F.size(); ++j)
                d[F[j]] = ls.ok ? ls.x[static_cast<int>(j)] : rhs[static_cast<int>(j)];
            // A free variable sitting on its bound may not move down.
            bool blocked = false;
            for (int i : F) {
                if (d[i] < 0 && at_bound(u[i], lb[i])) {
                    frozen[i] = 1;
                    blocked = true;
                }
            }
            if (!blocked)
                break;
        }
        double slope = ev.gradient.dot(d);
        if (!(slope < 0)) {
            // Projected steepest descent.
            for (int i = 0; i < m; ++i)
                d[i] = (at_bound(u[i], lb[i]) && ev.gradient[i] > 0) ? 0.0 : -ev.gradient[i];
            slope = ev.gradient.dot(d);
        }
        const double dmax = max_abs(d);
        if (!(slope < 0) || dmax == 0) {
            fail(rep, SolveStatus::LineSearchFailure, opts, "no descent direction");
            break;
        }
        if (dmax > opts.max_step)
            d *= opts.max_step / dmax;
        slope = ev.gradient.dot(d);

        // Ratio test: the first bound hit along d.
        double tmax = 1.0;
        int hit = -1;
        for (int i = 0; i < m; ++i) {
            if (d[i] < 0) {
                const double ti = (lb[i] - u[i]) / d[i];
                if (ti < tmax) {
                    tmax = std::max(ti, 0.0);
                    hit = i;
                }
            }
        }

        const double gnorm = projected_gradient_norm(u, lb, ev.gradient);
        bool accepted = false;
        double t = tmax;
        for (int k = 0; k < opts.max_backtracks; ++k, t *= opts.shrink) {
            std::vector<double> trial(u);
            for (int i = 0; i < m; ++i)
                trial[i] = std::max(u[i] + t * d[i], lb[i]);
            if (hit >= 0 && t == tmax)
                trial[hit] = lb[hit];
            EnergyEvaluation next = e_bar(M, vinf, trial, eopts);
            if (next.value <= ev.value + opts.sufficient_decrease * t * slope ||
                roundoff_acceptable(ev.value, next.value, gnorm,
                                    projected_gradient_norm(trial, lb, next.gradient))) {
                rep.flips_total += static_cast<long>(next.delaunay.flips.size());
                u = std::move(trial);
                ev = std::move(next);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            fail(rep, SolveStatus::LineSearchFailure, opts,
                 "backtracking found no decrease (|grad| = " + std::to_string(gnorm) + ")");
            break;
        }
    }

    rep.u = u;
    rep.energy = ev.value;
    rep.kkt = kkt_from(u, lb, ev.gradient, vertex_of, opts.gradient_tolerance);
    rep.active_set = rep.kkt.active;
    rep.final_evaluation = std::move(ev);
    return rep;
}

KktReport kkt_check(const DecoratedMetric& M, const ConeAngleTarget& theta, const std::vector<double>& u, double tol)
{
    const EnergyEvaluation ev = e_theta(M, theta, u);
    KktReport k;
    k.stationarity = max_abs(ev.gradient);
    k.ok = k.stationarity <= tol;
    if (!k.ok)
        k.failure = "stationarity";
    return k;
}

KktReport kkt_check(const DecoratedMetric& M, int vinf, const std::vector<double>& u, double tol)
{
    const int n = M.tri.num_vertices();
    if (vinf < 0 || vinf >= n)
        throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(vinf));
    const std::vector<double> lb = lower_bounds(M, vinf);
    std::vector<int> vertex_of;
    for (int v = 0; v < n; ++v)
        if (v != vinf)
            vertex_of.push_back(v);
    const EnergyEvaluation ev = e_bar(M, vinf, u);
    return kkt_from(u, lb, ev.gradient, vertex_of, tol);
}

} // namespace uniformize
