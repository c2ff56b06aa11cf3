#include "uniformize/delaunay.hpp"

#include "uniformize/errors.hpp"
#include "uniformize/triangle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

namespace uniformize {

namespace {

struct Level {
    double exps[6];
    double signs[6];
    int n = 0;

    void add(double x, double s)
    {
        exps[n] = x;
        signs[n] = s;
        ++n;
    }

    void reduce(double& value, double& scale, double& log_unit) const
    {
        if (n == 0) {
            value = scale = 0.0;
            log_unit = -std::numeric_limits<double>::infinity();
            return;
        }
        double m = exps[0];
        for (int k = 1; k < n; ++k)
            m = std::max(m, exps[k]);
        value = scale = 0.0;
        for (int k = 0; k < n; ++k) {
            const double w = std::exp(exps[k] - m);
            value += signs[k] * w;
            scale += w;
        }
        log_unit = m;
    }
};

void check_decoration(const Triangulation& T, const PartialDecoration& u)
{
    if (u.size() != T.num_vertices() || static_cast<int>(u.missing.size()) != T.num_vertices())
        throw Error(ErrorCode::InvalidInput, "decoration needs one entry per vertex");
    bool any = false;
    for (int v = 0; v < u.size(); ++v) {
        if (u.decorated(v)) {
            any = true;
            if (!std::isfinite(u.value[v]))
                throw Error(ErrorCode::InvalidInput, "decorated shifts must be finite");
        }
    }
    if (!any)
        throw Error(ErrorCode::InvalidInput, "at least one horocycle must be present");
}

double deciding_margin(const MarginParts& p, double tol)
{
    if (std::abs(p.decorated) > tol * p.decorated_scale || p.undecorated_scale == 0.0)
        return p.decorated * std::exp(p.decorated_log_unit);
    return p.undecorated * std::exp(p.undecorated_log_unit);
}

} // namespace

MarginParts margin_parts(const Triangulation& T, const std::vector<double>& lambda,
                         const PartialDecoration& u, int e)
{
    const int h0 = T.half(e, 0), h1 = T.half(e, 1);
    const int corners[6] = {h0, Triangulation::next(h1), Triangulation::next(h0), h1, Triangulation::prev(h0),
                            Triangulation::prev(h1)};
    Level dec, und;
    for (int k = 0; k < 6; ++k) {
        const int c = corners[k];
        const double sign = k < 4 ? 1.0 : -1.0;
        const double x = corner_log_arc(T, lambda, c);
        const int v = T.tail(c);
        if (u.decorated(v))
            dec.add(x - u.value[v], sign);
        else
            und.add(x, sign);
    }
    MarginParts p;
    dec.reduce(p.decorated, p.decorated_scale, p.decorated_log_unit);
    und.reduce(p.undecorated, p.undecorated_scale, p.undecorated_log_unit);
    return p;
}

double delaunay_margin(const DecoratedMetric& M, const PartialDecoration& u, int e)
{
    if (e < 0 || e >= M.tri.num_edges())
        throw Error(ErrorCode::InvalidInput, "edge " + std::to_string(e) + " out of range");
    check_decoration(M.tri, u);
    const MarginParts p = margin_parts(M.tri, M.lambda, u, e);
    return p.decorated_scale == 0.0 ? 0.0 : p.decorated * std::exp(p.decorated_log_unit);
}

EdgeStatus edge_status(const MarginParts& p, double tol)
{
    if (p.decorated > tol * p.decorated_scale)
        return EdgeStatus::Strict;
    if (p.decorated < -tol * p.decorated_scale)
        return EdgeStatus::Violating;
    if (p.undecorated < -tol * p.undecorated_scale)
        return EdgeStatus::Violating;
    return EdgeStatus::Nonessential;
}

DelaunayResult make_delaunay(const DecoratedMetric& M, const PartialDecoration& u, DelaunayMode mode,
                             const DelaunayOptions& opts)
{
    check_decoration(M.tri, u);
    DelaunayResult R{M, u, {}, {}, {}, {}};
    Triangulation& T = R.metric.tri;
    std::vector<double>& lambda = R.metric.lambda;
    const int ne = T.num_edges();
    const long cap = opts.max_flips.value_or(1000L * ne + 10000L);
    const double tol = opts.tolerance;

    auto do_flip = [&](int e) {
        if (Triangulation::triangle_of(T.half(e, 0)) == Triangulation::triangle_of(T.half(e, 1)))
            throw Error(ErrorCode::DegenerateQuad,
                        "edge " + std::to_string(e) + " must be flipped but lies in a single triangle");
        if (static_cast<long>(R.flips.size()) >= cap)
            throw Error(ErrorCode::FlipLimitExceeded, "more than " + std::to_string(cap) + " flips");
        const double before = lambda[e];
        const double after = ptolemy_flip(T, lambda, e);
        R.flips.push_back({e, before, after});
    };

    std::deque<int> queue;
    std::vector<char> queued(ne, 0);
    auto push = [&](int e) {
        if (!queued[e]) {
            queued[e] = 1;
            queue.push_back(e);
        }
    };
    for (int e = 0; e < ne; ++e)
        push(e);

    for (;;) {
        while (!queue.empty()) {
            const int e = queue.front();
            queue.pop_front();
            queued[e] = 0;
            if (edge_status(margin_parts(T, lambda, u, e), tol) != EdgeStatus::Violating)
                continue;
            do_flip(e);
            for (int h : {T.half(e, 0), T.half(e, 1)}) {
                push(T.edge(Triangulation::next(h)));
                push(T.edge(Triangulation::prev(h)));
            }
        }
        if (mode == DelaunayMode::Plain)
            break;

        // Fan every punctured face from its central vertex.
        bool flipped = false;
        for (int e = 0; e < ne; ++e) {
            const int h0 = T.half(e, 0), h1 = T.half(e, 1);
            if (Triangulation::triangle_of(h0) == Triangulation::triangle_of(h1))
                continue;
            if (!u.decorated(T.v1(e)) || !u.decorated(T.v2(e)))
                continue;
            const int a = T.tail(Triangulation::prev(h0)), b = T.tail(Triangulation::prev(h1));
            if (u.decorated(a) && u.decorated(b))
                continue;
            if (edge_status(margin_parts(T, lambda, u, e), tol) != EdgeStatus::Nonessential)
                continue;
            do_flip(e);
            flipped = true;
            for (int h : {T.half(e, 0), T.half(e, 1)}) {
                push(T.edge(Triangulation::next(h)));
                push(T.edge(Triangulation::prev(h)));
            }
        }
        if (!flipped)
            break;
    }

    R.lambda_tilde.resize(ne);
    for (int e = 0; e < ne; ++e) {
        const int p = T.v1(e), q = T.v2(e);
        R.lambda_tilde[e] = (u.decorated(p) && u.decorated(q))
                                ? lambda[e] + u.value[p] + u.value[q]
                                : std::numeric_limits<double>::infinity();
        if (edge_status(margin_parts(T, lambda, u, e), tol) == EdgeStatus::Nonessential)
            R.nonessential.push_back(e);
    }
    R.punctured_faces.resize(T.num_vertices());
    for (int v = 0; v < T.num_vertices(); ++v) {
        if (u.decorated(v))
            continue;
        for (int c : T.corners_at(v))
            R.punctured_faces[v].push_back(Triangulation::triangle_of(c));
    }
    return R;
}

DelaunayCheck check_delaunay(const DecoratedMetric& M, const PartialDecoration& u, double tol)
{
    check_decoration(M.tri, u);
    DelaunayCheck out;
    for (int e = 0; e < M.tri.num_edges(); ++e) {
        const MarginParts p = margin_parts(M.tri, M.lambda, u, e);
        switch (edge_status(p, tol)) {
        case EdgeStatus::Violating:
            out.ok = false;
            out.violations.emplace_back(e, deciding_margin(p, tol));
            break;
        case EdgeStatus::Nonessential:
            out.nonessential.push_back(e);
            break;
        case EdgeStatus::Strict:
            break;
        }
    }
    return out;
}

bool triangle_inequality_check(const DecoratedMetric& M)
{
    const Triangulation& T = M.tri;
    for (int t = 0; t < T.num_triangles(); ++t) {
        const std::array<double, 3> x{0.5 * M.lambda[T.edge(3 * t)], 0.5 * M.lambda[T.edge(3 * t + 1)],
                                      0.5 * M.lambda[T.edge(3 * t + 2)]};
        if (!in_domain_a(x))
            return false;
    }
    return true;
}

CrossCheck euclidean_delaunay_crosscheck(const DecoratedMetric& M, double tol)
{
    const Triangulation& T = M.tri;
    if (!triangle_inequality_check(M))
        throw Error(ErrorCode::TriangleInequalityViolated, "metric is not piecewise euclidean");
    std::vector<TriangleAngles> ang(T.num_triangles());
    for (int t = 0; t < T.num_triangles(); ++t)
        ang[t] = angles_from_log_lengths({0.5 * M.lambda[T.edge(3 * t)], 0.5 * M.lambda[T.edge(3 * t + 1)],
                                          0.5 * M.lambda[T.edge(3 * t + 2)]});
    const auto u = PartialDecoration::finite(std::vector<double>(T.num_vertices(), 0.0));
    CrossCheck out;
    out.cot_weight.resize(T.num_edges());
    out.margin.resize(T.num_edges());
    for (int e = 0; e < T.num_edges(); ++e) {
        const int h0 = T.half(e, 0), h1 = T.half(e, 1);
        const double c0 = ang[h0 / 3].cot[h0 % 3], c1 = ang[h1 / 3].cot[h1 % 3];
        const double w = c0 + c1;
        const MarginParts p = margin_parts(T, M.lambda, u, e);
        out.cot_weight[e] = w;
        out.margin[e] = p.decorated;
        const double tw = tol * (1.0 + std::abs(c0) + std::abs(c1));
        const double tm = tol * p.decorated_scale;
        if ((w > tw && p.decorated < -tm) || (w < -tw && p.decorated > tm)) {
            out.consistent = false;
            out.mismatches.push_back(e);
        }
    }
    return out;
}

std::vector<double> horocycle_distances_to(const DecoratedMetric& M, int target)
{
    const Triangulation& T0 = M.tri;
    if (target < 0 || target >= T0.num_vertices())
        throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(target));
    const DelaunayResult R =
        make_delaunay(M, PartialDecoration::only(T0.num_vertices(), target), DelaunayMode::Adjusted);
    const Triangulation& T = R.metric.tri;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> delta(T.num_vertices(), nan);
    for (int e = 0; e < T.num_edges(); ++e) {
        int p = T.v1(e), q = T.v2(e);
        if (p == q || (p != target && q != target))
            continue;
        const int w = p == target ? q : p;
        const double x = R.metric.lambda[e];
        if (std::isnan(delta[w]))
            delta[w] = x;
        else if (std::abs(delta[w] - x) > 1e-9 * std::max(1.0, std::abs(x)))
            throw Error(ErrorCode::InternalInconsistency,
                        "edges of the punctured face at vertex " + std::to_string(w) + " disagree");
    }
    for (int v = 0; v < T.num_vertices(); ++v) {
        if (v != target && std::isnan(delta[v]))
            throw Error(ErrorCode::InternalInconsistency,
                        "vertex " + std::to_string(v) + " is not joined to vertex " + std::to_string(target));
    }
    return delta;
}

double horocycle_distance(const DecoratedMetric& M, int v1, int v2)
{
    const int n = M.tri.num_vertices();
    if (v1 < 0 || v1 >= n || v2 < 0 || v2 >= n)
        throw Error(ErrorCode::UnknownVertex, "vertex out of range");
    if (v1 == v2)
        throw Error(ErrorCode::SameVertex, "horocycle distance needs two distinct vertices");
    return horocycle_distances_to(M, v2)[v1];
}

} // namespace uniformize
