#include "uniformize/energy.hpp"

#include "uniformize/errors.hpp"
#include "uniformize/triangle.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <string>

namespace uniformize {

namespace {

constexpr double kPi = std::numbers::pi;

void one_triangle(const Triangulation& T, const std::vector<double>& lambda, int t, TriangleTerms& out)
{
    const std::array<double, 3> x{0.5 * lambda[T.edge(3 * t)], 0.5 * lambda[T.edge(3 * t + 1)],
                                  0.5 * lambda[T.edge(3 * t + 2)]};
    if (!in_domain_a(x))
        throw Error(ErrorCode::OutsideDomainA, "triangle " + std::to_string(t) + " is not euclidean");
    const TriangleAngles a = angles_from_log_lengths(x);
    double f = 0.0;
    for (int i = 0; i < 3; ++i)
        f += a.angle[i] * x[i] + lobachevsky(a.angle[i]);
    out.two_f[t] = 2.0 * f;
    out.angle[t] = a.angle;
    out.cot[t] = a.cot;
}

TriangleTerms empty_terms(int nt)
{
    TriangleTerms out;
    out.two_f.assign(nt, 0.0);
    out.angle.assign(nt, {0.0, 0.0, 0.0});
    out.cot.assign(nt, {0.0, 0.0, 0.0});
    return out;
}

std::vector<double> log_horocycle_lengths(const DecoratedMetric& M)
{
    std::vector<double> out(M.tri.num_vertices());
    for (int v = 0; v < M.tri.num_vertices(); ++v)
        out[v] = log_horocycle_length(M, v);
    return out;
}

// Angle sums, accumulated corner by corner in cycle order.
std::vector<double> angle_sums(const Triangulation& T, const TriangleTerms& terms,
                               const std::vector<char>* kept_triangles, int skip_vertex)
{
    std::vector<double> theta(T.num_vertices(), 0.0);
    for (int v = 0; v < T.num_vertices(); ++v) {
        if (v == skip_vertex)
            continue;
        double s = 0.0;
        for (int c : T.corners_at(v)) {
            const int t = Triangulation::triangle_of(c);
            if (kept_triangles && !(*kept_triangles)[t])
                continue;
            s += terms.angle[t][Triangulation::next(c) % 3];
        }
        theta[v] = s;
    }
    return theta;
}

Eigen::SparseMatrix<double> cotan_hessian(const Triangulation& T, const TriangleTerms& terms,
                                          const std::vector<char>* kept_triangles, const std::vector<int>& index,
                                          int n)
{
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(12 * T.num_triangles());
    for (int t = 0; t < T.num_triangles(); ++t) {
        if (kept_triangles && !(*kept_triangles)[t])
            continue;
        for (int i = 0; i < 3; ++i) {
            const int h = 3 * t + i;
            const int p = index[T.tail(h)], q = index[T.head(h)];
            if (p == q)
                continue;
            const double w = 0.5 * terms.cot[t][i];
            trip.emplace_back(p, p, w);
            trip.emplace_back(q, q, w);
            trip.emplace_back(p, q, -w);
            trip.emplace_back(q, p, -w);
        }
    }
    Eigen::SparseMatrix<double> H(n, n);
    H.setFromTriplets(trip.begin(), trip.end());
    return H;
}

void check_sizes(const DecoratedMetric& M, const ConeAngleTarget& theta)
{
    if (static_cast<int>(theta.theta.size()) != M.tri.num_vertices())
        throw Error(ErrorCode::InvalidInput, "theta needs one value per vertex");
    if (static_cast<int>(M.lambda.size()) != M.tri.num_edges())
        throw Error(ErrorCode::InvalidInput, "lambda needs one value per edge");
}

} // namespace

TriangleTerms triangle_terms_serial(const Triangulation& T, const std::vector<double>& lambda,
                                    const std::vector<char>* kept)
{
    const int nt = T.num_triangles();
    TriangleTerms out = empty_terms(nt);
    for (int t = 0; t < nt; ++t) {
        if (kept && !(*kept)[t])
            continue;
        one_triangle(T, lambda, t, out);
    }
    return out;
}

TriangleTerms triangle_terms_parallel(const Triangulation& T, const std::vector<double>& lambda,
                                      const std::vector<char>* kept)
{
    const int nt = T.num_triangles();
    TriangleTerms out = empty_terms(nt);
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (int t = 0; t < nt; ++t) {
        if (kept && !(*kept)[t])
            continue;
        try {
            one_triangle(T, lambda, t, out);
        } catch (...) {
#pragma omp critical(uniformize_terms_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

TriangleTerms triangle_terms(const Triangulation& T, const std::vector<double>& lambda,
                             const std::vector<char>* kept, Exec exec)
{
    return exec == Exec::Parallel ? triangle_terms_parallel(T, lambda, kept)
                                  : triangle_terms_serial(T, lambda, kept);
}

double h_theta(const DecoratedMetric& M, const ConeAngleTarget& theta)
{
    check_sizes(M, theta);
    const TriangleTerms terms = triangle_terms_serial(M.tri, M.lambda);
    double value = 0.0;
    for (double x : terms.two_f)
        value += x;
    for (double l : M.lambda)
        value -= kPi * l;
    for (int v = 0; v < M.tri.num_vertices(); ++v)
        value -= theta.theta[v] * log_horocycle_length(M, v);
    return value;
}

HThetaDerivatives h_theta_derivatives(const DecoratedMetric& M, const ConeAngleTarget& theta)
{
    check_sizes(M, theta);
    const Triangulation& T = M.tri;
    const int ne = T.num_edges();
    const TriangleTerms terms = triangle_terms_serial(T, M.lambda);
    HThetaDerivatives D{0.0, Eigen::VectorXd::Zero(ne), Eigen::MatrixXd::Zero(ne, ne)};

    for (int t = 0; t < T.num_triangles(); ++t) {
        D.value += terms.two_f[t];
        for (int i = 0; i < 3; ++i) {
            const int ei = T.edge(3 * t + i);
            const int ej = T.edge(3 * t + (i + 1) % 3);
            const int ek = T.edge(3 * t + (i + 2) % 3);
            D.gradient[ei] += terms.angle[t][i];
            // Hessian of 2 f(lambda / 2) is half the Hessian of f.
            const double c = 0.5 * terms.cot[t][i];
            D.hessian(ej, ej) += c;
            D.hessian(ek, ek) += c;
            D.hessian(ej, ek) -= c;
            D.hessian(ek, ej) -= c;
        }
    }
    for (int e = 0; e < ne; ++e) {
        D.value -= kPi * M.lambda[e];
        D.gradient[e] -= kPi;
    }
    for (int v = 0; v < T.num_vertices(); ++v) {
        if (theta.theta[v] == 0.0)
            continue;
        const double log_c = log_horocycle_length(M, v);
        D.value -= theta.theta[v] * log_c;
        // Derivatives of log c_v, with arcs normalized by c_v.
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(ne);
        Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(ne, ne);
        for (int c : T.corners_at(v)) {
            const double a = std::exp(corner_log_arc(T, M.lambda, c) - log_c);
            Eigen::VectorXd s = Eigen::VectorXd::Zero(ne);
            s[T.edge(Triangulation::next(c))] += 0.5;
            s[T.edge(c)] -= 0.5;
            s[T.edge(Triangulation::prev(c))] -= 0.5;
            grad += a * s;
            hess += a * s * s.transpose();
        }
        hess -= grad * grad.transpose();
        D.gradient -= theta.theta[v] * grad;
        D.hessian -= theta.theta[v] * hess;
    }
    return D;
}

EnergyEvaluation e_theta(const DecoratedMetric& M, const ConeAngleTarget& theta, const std::vector<double>& u,
                         const EnergyOptions& opts)
{
    check_sizes(M, theta);
    const int n = M.tri.num_vertices();
    if (static_cast<int>(u.size()) != n)
        throw Error(ErrorCode::InvalidInput, "u needs one value per vertex");
    for (double x : u)
        if (!std::isfinite(x))
            throw Error(ErrorCode::InvalidInput, "u must be finite");

    EnergyEvaluation ev;
    ev.delaunay = make_delaunay(opts.warm_start ? *opts.warm_start : M, PartialDecoration::finite(u),
                                DelaunayMode::Plain, opts.delaunay);
    const Triangulation& T = ev.delaunay.metric.tri;
    const std::vector<double>& lt = ev.delaunay.lambda_tilde;
    const TriangleTerms terms = triangle_terms(T, lt, nullptr, opts.exec);
    const std::vector<double> log_c = log_horocycle_lengths(M);

    double value = 0.0;
    for (double x : terms.two_f)
        value += x;
    for (double l : lt)
        value -= kPi * l;
    for (int v = 0; v < n; ++v)
        value -= theta.theta[v] * (log_c[v] - u[v]);
    ev.value = value;

    ev.theta_tilde = angle_sums(T, terms, nullptr, -1);
    ev.free_vertices.resize(n);
    ev.gradient.resize(n);
    for (int v = 0; v < n; ++v) {
        ev.free_vertices[v] = v;
        ev.gradient[v] = theta.theta[v] - ev.theta_tilde[v];
    }
    ev.hessian = cotan_hessian(T, terms, nullptr, ev.free_vertices, n);
    return ev;
}

PartialDecoration decoration_without(int vinf, const std::vector<double>& u)
{
    const int n = static_cast<int>(u.size()) + 1;
    if (vinf < 0 || vinf >= n)
        throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(vinf));
    PartialDecoration d;
    d.value.assign(n, 0.0);
    d.missing.assign(n, 0);
    for (int v = 0, i = 0; v < n; ++v) {
        if (v == vinf)
            d.missing[v] = 1;
        else
            d.value[v] = u[i++];
    }
    return d;
}

EnergyEvaluation e_bar(const DecoratedMetric& M, int vinf, const std::vector<double>& u, const EnergyOptions& opts)
{
    const int n = M.tri.num_vertices();
    if (vinf < 0 || vinf >= n)
        throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(vinf));
    if (static_cast<int>(u.size()) != n - 1)
        throw Error(ErrorCode::InvalidInput, "u needs one value per vertex other than vinf");
    for (double x : u)
        if (!std::isfinite(x))
            throw Error(ErrorCode::InvalidInput, "u must be finite");

    EnergyEvaluation ev;
    ev.delaunay = make_delaunay(opts.warm_start ? *opts.warm_start : M, decoration_without(vinf, u),
                                DelaunayMode::Adjusted, opts.delaunay);
    const Triangulation& T = ev.delaunay.metric.tri;
    const std::vector<double>& lt = ev.delaunay.lambda_tilde;
    const Subcomplex S = subcomplex_avoiding(T, vinf);
    const TriangleTerms terms = triangle_terms(T, lt, &S.triangle_kept, opts.exec);
    const std::vector<double> log_c = log_horocycle_lengths(M);

    double value = 0.0;
    for (int t : S.triangles)
        value += terms.two_f[t];
    for (int e : S.edges)
        value -= kPi * lt[e];
    for (int v = 0, i = 0; v < n; ++v) {
        if (v == vinf)
            continue;
        value -= 2.0 * kPi * (log_c[v] - u[i++]);
    }
    ev.value = value;

    ev.theta_tilde = angle_sums(T, terms, &S.triangle_kept, vinf);
    std::vector<int> index(n, -1);
    for (int v = 0; v < n; ++v) {
        if (v == vinf)
            continue;
        index[v] = static_cast<int>(ev.free_vertices.size());
        ev.free_vertices.push_back(v);
    }
    ev.gradient.resize(n - 1);
    for (int i = 0; i < n - 1; ++i) {
        const int v = ev.free_vertices[i];
        const auto [deg1, deg2] = vertex_degrees(T, &S, v);
        ev.gradient[i] = -ev.theta_tilde[v] + kPi * (deg2 - deg1 + 2);
    }
    // The removed vertex never appears in a kept triangle, so its index is unused.
    ev.hessian = cotan_hessian(T, terms, &S.triangle_kept, index, n - 1);
    return ev;
}

namespace {

struct Pullback {
    double value;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
};

// H_Theta in the flipped chart, as a function of the lambda of the original chart.
Pullback pulled_back(const DecoratedMetric& M, const ConeAngleTarget& theta, int e)
{
    const Triangulation& T = M.tri;
    const int ne = T.num_edges();
    const auto q = quad_sides(T, e);
    const int kD = T.edge(q[0]), kE = T.edge(q[1]), kB = T.edge(q[2]), kC = T.edge(q[3]);
    const double y1 = 0.5 * (M.lambda[kD] + M.lambda[kB]);
    const double y2 = 0.5 * (M.lambda[kE] + M.lambda[kC]);
    const double p = 1.0 / (1.0 + std::exp(y2 - y1));

    Eigen::MatrixXd J = Eigen::MatrixXd::Identity(ne, ne);
    J.row(e).setZero();
    J(e, kD) += p;
    J(e, kB) += p;
    J(e, kE) += 1.0 - p;
    J(e, kC) += 1.0 - p;
    J(e, e) -= 1.0;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(ne);
    g[kD] += 0.5;
    g[kB] += 0.5;
    g[kE] -= 0.5;
    g[kC] -= 0.5;

    DecoratedMetric M2 = M;
    ptolemy_flip(M2.tri, M2.lambda, e);
    const HThetaDerivatives D2 = h_theta_derivatives(M2, theta);
    Pullback out;
    out.value = D2.value;
    out.gradient = J.transpose() * D2.gradient;
    out.hessian = J.transpose() * D2.hessian * J + D2.gradient[e] * 2.0 * p * (1.0 - p) * g * g.transpose();
    return out;
}

DecoratedMetric moved(const DecoratedMetric& M, const Eigen::VectorXd& d, double h)
{
    DecoratedMetric out = M;
    for (int k = 0; k < static_cast<int>(out.lambda.size()); ++k)
        out.lambda[k] += h * d[k];
    return out;
}

} // namespace

CrossFlipReport crossflip_c2_check(const DecoratedMetric& M, const ConeAngleTarget& theta, int e,
                                   const Eigen::VectorXd* probe_direction)
{
    check_sizes(M, theta);
    const Triangulation& T = M.tri;
    if (e < 0 || e >= T.num_edges())
        throw Error(ErrorCode::InvalidInput, "edge out of range");
    if (Triangulation::triangle_of(T.half(e, 0)) == Triangulation::triangle_of(T.half(e, 1)))
        throw Error(ErrorCode::DegenerateQuad, "edge lies in a single triangle");
    const auto zero = PartialDecoration::finite(std::vector<double>(T.num_vertices(), 0.0));
    if (edge_status(margin_parts(T, M.lambda, zero, e), 1e-9) != EdgeStatus::Nonessential)
        throw Error(ErrorCode::NotNeutral, "edge " + std::to_string(e) + " is not cocircular");

    const HThetaDerivatives D1 = h_theta_derivatives(M, theta);
    const Pullback P = pulled_back(M, theta, e);
    CrossFlipReport r;
    r.value_diff = std::abs(D1.value - P.value);
    r.gradient_diff = (D1.gradient - P.gradient).cwiseAbs().maxCoeff();
    r.hessian_diff = (D1.hessian - P.hessian).cwiseAbs().maxCoeff();

    const int ne = T.num_edges();
    Eigen::VectorXd d(ne);
    if (probe_direction) {
        d = *probe_direction;
    } else {
        for (int k = 0; k < ne; ++k)
            d[k] = std::sin(1.0 + 2.3 * k);
    }
    d /= d.norm();
    const double h = 1e-4;
    const Eigen::MatrixXd T1 = (h_theta_derivatives(moved(M, d, h), theta).hessian -
                                h_theta_derivatives(moved(M, d, -h), theta).hessian) / (2 * h);
    const Eigen::MatrixXd T2 =
        (pulled_back(moved(M, d, h), theta, e).hessian - pulled_back(moved(M, d, -h), theta, e).hessian) / (2 * h);
    r.third_diff = (T1 - T2).cwiseAbs().maxCoeff();
    return r;
}

} // namespace uniformize
