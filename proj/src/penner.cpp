#include "uniformize/penner.hpp"

#include "uniformize/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace uniformize {

double DecoratedMetric::ell(int e) const { return std::exp(0.5 * lambda.at(e)); }

DecoratedMetric make_metric(Triangulation tri, std::vector<double> lambda)
{
    if (static_cast<int>(lambda.size()) != tri.num_edges())
        throw Error(ErrorCode::InvalidInput, "expected " + std::to_string(tri.num_edges()) +
                                                 " lambda values, got " + std::to_string(lambda.size()));
    for (double x : lambda)
        if (!std::isfinite(x))
            throw Error(ErrorCode::InvalidInput, "lambda must be finite");
    return {std::move(tri), std::move(lambda)};
}

PartialDecoration PartialDecoration::finite(std::vector<double> u)
{
    PartialDecoration d;
    d.missing.assign(u.size(), 0);
    d.value = std::move(u);
    return d;
}

PartialDecoration PartialDecoration::only(int num_vertices, int v, double value)
{
    PartialDecoration d;
    d.value.assign(num_vertices, 0.0);
    d.missing.assign(num_vertices, 1);
    d.value[v] = value;
    d.missing[v] = 0;
    return d;
}

std::array<double, 3> arc_lengths(const std::array<double, 3>& l)
{
    return {std::exp(0.5 * (l[0] - l[1] - l[2])), std::exp(0.5 * (l[1] - l[2] - l[0])),
            std::exp(0.5 * (l[2] - l[0] - l[1]))};
}

std::array<double, 3> lambda_from_arcs(const std::array<double, 3>& a)
{
    return {-std::log(a[1]) - std::log(a[2]), -std::log(a[2]) - std::log(a[0]),
            -std::log(a[0]) - std::log(a[1])};
}

double corner_log_arc(const Triangulation& T, const std::vector<double>& lambda, int c)
{
    const int opposite = T.edge(Triangulation::next(c));
    return 0.5 * (lambda[opposite] - lambda[T.edge(c)] - lambda[T.edge(Triangulation::prev(c))]);
}

double horocycle_length(const DecoratedMetric& M, int v)
{
    double sum = 0.0;
    for (int c : M.tri.corners_at(v))
        sum += std::exp(corner_log_arc(M.tri, M.lambda, c));
    return sum;
}

double log_horocycle_length(const DecoratedMetric& M, int v)
{
    const auto corners = M.tri.corners_at(v);
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> x;
    x.reserve(corners.size());
    for (int c : corners) {
        x.push_back(corner_log_arc(M.tri, M.lambda, c));
        mx = std::max(mx, x.back());
    }
    double s = 0.0;
    for (double xi : x)
        s += std::exp(xi - mx);
    return mx + std::log(s);
}

DecoratedMetric fiber_shift(const DecoratedMetric& M, const std::vector<double>& u)
{
    if (static_cast<int>(u.size()) != M.tri.num_vertices())
        throw Error(ErrorCode::InvalidInput, "fiber shift needs one value per vertex");
    DecoratedMetric out = M;
    for (int e = 0; e < M.tri.num_edges(); ++e)
        out.lambda[e] += u[M.tri.v1(e)] + u[M.tri.v2(e)];
    return out;
}

std::array<int, 4> quad_sides(const Triangulation& T, int e)
{
    const int h0 = T.half(e, 0), h1 = T.half(e, 1);
    return {Triangulation::next(h1), Triangulation::prev(h1), Triangulation::next(h0),
            Triangulation::prev(h0)};
}

ShearCoordinates shear_from_penner(const DecoratedMetric& M)
{
    const Triangulation& T = M.tri;
    ShearCoordinates S{T, std::vector<double>(T.num_edges())};
    for (int e = 0; e < T.num_edges(); ++e) {
        const auto q = quad_sides(T, e); // a->d, d->b, b->c, c->a
        const double lD = M.lambda[T.edge(q[0])], lE = M.lambda[T.edge(q[1])];
        const double lB = M.lambda[T.edge(q[2])], lC = M.lambda[T.edge(q[3])];
        S.sigma[e] = 0.5 * (lC + lE - lB - lD);
    }
    return S;
}

DecoratedMetric penner_from_shear(const ShearCoordinates& S, const std::vector<double>& anchor_arcs)
{
    const Triangulation& T = S.tri;
    if (static_cast<int>(S.sigma.size()) != T.num_edges())
        throw Error(ErrorCode::InvalidInput, "shear vector has the wrong size");
    if (static_cast<int>(anchor_arcs.size()) != T.num_vertices())
        throw Error(ErrorCode::InvalidInput, "need one anchor arc per vertex");
    std::vector<double> log_arc(T.num_halfedges());
    for (int v = 0; v < T.num_vertices(); ++v) {
        if (!(anchor_arcs[v] > 0.0) || !std::isfinite(anchor_arcs[v]))
            throw Error(ErrorCode::InvalidInput, "anchor arcs must be positive");
        const auto corners = T.corners_at(v);
        double acc = std::log(anchor_arcs[v]);
        double sum = 0.0, scale = 1.0;
        for (int c : corners) {
            log_arc[c] = acc;
            const double s = S.sigma[T.edge(c)];
            acc += s;
            sum += s;
            scale += std::abs(s);
        }
        if (std::abs(sum) > 1e-8 * scale)
            throw Error(ErrorCode::IncompatibleShear,
                        "shears around vertex " + std::to_string(v) + " sum to " + std::to_string(sum));
    }
    std::vector<double> lambda(T.num_edges());
    for (int e = 0; e < T.num_edges(); ++e) {
        const int h = T.half(e, 0);
        lambda[e] = -log_arc[h] - log_arc[Triangulation::next(h)];
    }
    return {T, std::move(lambda)};
}

double ptolemy_update(double la, double lb, double lc, double ld, double le)
{
    const double x = 0.5 * (la + lc);
    const double y = 0.5 * (lb + ld);
    const double m = std::max(x, y);
    return 2.0 * (m + std::log1p(std::exp(-std::abs(x - y)))) - le;
}

double ptolemy_flip(Triangulation& T, std::vector<double>& lambda, int e)
{
    const auto q = quad_sides(T, e);
    const double lf = ptolemy_update(lambda[T.edge(q[0])], lambda[T.edge(q[1])], lambda[T.edge(q[2])],
                                     lambda[T.edge(q[3])], lambda[e]);
    T.flip_in_place(e);
    lambda[e] = lf;
    return lf;
}

} // namespace uniformize
