#include "uniformize/realize.hpp"

#include "uniformize/errors.hpp"
#include "uniformize/triangle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

namespace uniformize {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector2d rotate(const Eigen::Vector2d& v, double a)
{
    return {std::cos(a) * v.x() - std::sin(a) * v.y(), std::sin(a) * v.x() + std::cos(a) * v.y()};
}

std::array<double, 3> half_lambdas(const Triangulation& T, const std::vector<double>& lambda, int t)
{
    return {0.5 * lambda[T.edge(3 * t)], 0.5 * lambda[T.edge(3 * t + 1)], 0.5 * lambda[T.edge(3 * t + 2)]};
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x)
    {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

// Angle sums over kept triangles, in corner order.
std::vector<double> kept_angle_sums(const Triangulation& T, const std::vector<double>& lambda,
                                    const std::vector<char>* kept)
{
    std::vector<double> theta(T.num_vertices(), 0.0);
    std::vector<TriangleAngles> ang(T.num_triangles());
    for (int t = 0; t < T.num_triangles(); ++t)
        if (!kept || (*kept)[t])
            ang[t] = angles_from_log_lengths(half_lambdas(T, lambda, t));
    for (int v = 0; v < T.num_vertices(); ++v) {
        double s = 0.0;
        for (int c : T.corners_at(v)) {
            const int t = Triangulation::triangle_of(c);
            if (kept && !(*kept)[t])
                continue;
            s += ang[t].angle[Triangulation::next(c) % 3];
        }
        theta[v] = s;
    }
    return theta;
}

Eigen::Vector3d inverse_stereographic(const Eigen::Vector2d& x)
{
    const double r2 = x.squaredNorm();
    return Eigen::Vector3d(2 * x.x(), 2 * x.y(), r2 - 1) / (r2 + 1);
}

// Face cycles of the classes of a triangle partition.
std::vector<std::vector<int>> face_cycles(const Triangulation& T, UnionFind& uf)
{
    std::vector<std::vector<int>> faces;
    std::vector<int> roots;
    for (int t = 0; t < T.num_triangles(); ++t)
        if (uf.find(t) == t)
            roots.push_back(t);
    for (int root : roots) {
        // Boundary halfedges of this class, indexed by tail.
        std::vector<int> boundary;
        for (int h = 0; h < T.num_halfedges(); ++h) {
            if (uf.find(Triangulation::triangle_of(h)) != root)
                continue;
            if (uf.find(Triangulation::triangle_of(T.opp(h))) == root)
                continue;
            boundary.push_back(h);
        }
        std::map<int, int> next_of;
        for (int h : boundary) {
            if (next_of.count(T.tail(h)))
                throw Error(ErrorCode::InternalInconsistency, "face boundary visits a vertex twice");
            next_of[T.tail(h)] = h;
        }
        std::vector<int> cycle;
        int h = boundary.front();
        for (std::size_t k = 0; k <= boundary.size(); ++k) {
            cycle.push_back(T.tail(h));
            h = next_of.at(T.head(h));
            if (h == boundary.front())
                break;
        }
        if (cycle.size() != boundary.size())
            throw Error(ErrorCode::InternalInconsistency, "face boundary is not a single cycle");
        faces.push_back(std::move(cycle));
    }
    return faces;
}

void certify(Realization& R)
{
    const auto& P = R.points;
    R.sphere_residual = 0;
    for (const auto& p : P)
        R.sphere_residual = std::max(R.sphere_residual, std::abs(p.norm() - 1.0));

    // Orientation from the signed volume of the face fans.
    double volume = 0.0;
    std::vector<Eigen::Vector3d> normal(R.faces.size()), center(R.faces.size());
    for (std::size_t f = 0; f < R.faces.size(); ++f) {
        const auto& F = R.faces[f];
        Eigen::Vector3d n = Eigen::Vector3d::Zero(), c = Eigen::Vector3d::Zero();
        for (std::size_t i = 0; i < F.size(); ++i) {
            const Eigen::Vector3d& a = P[F[i]];
            const Eigen::Vector3d& b = P[F[(i + 1) % F.size()]];
            n += a.cross(b);
            c += a;
        }
        c /= static_cast<double>(F.size());
        normal[f] = n.normalized();
        center[f] = c;
        volume += c.dot(n);
    }
    const double sign = volume >= 0 ? 1.0 : -1.0;

    R.planarity = 0;
    R.convexity_margin = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < R.faces.size(); ++f) {
        std::set<int> on_face(R.faces[f].begin(), R.faces[f].end());
        for (int v = 0; v < static_cast<int>(P.size()); ++v) {
            const double d = sign * normal[f].dot(center[f] - P[v]);
            if (on_face.count(v))
                R.planarity = std::max(R.planarity, std::abs(d));
            else
                R.convexity_margin = std::min(R.convexity_margin, d);
        }
    }
    if (!std::isfinite(R.convexity_margin))
        R.convexity_margin = 0;
}

} // namespace

const char* realizable_kind_name(RealizableKind k)
{
    return k == RealizableKind::TwoSided ? "TwoSided" : "Polyhedral";
}

const char* realization_kind_name(RealizationKind k)
{
    switch (k) {
    case RealizationKind::InscribedPolyhedron:
        return "InscribedPolyhedron";
    case RealizationKind::TwoSidedPolygon:
        return "TwoSidedPolygon";
    case RealizationKind::FlatTorus:
        return "FlatTorus";
    case RealizationKind::ConeMetric:
        return "ConeMetric";
    }
    return "?";
}

RealizableKind classify_realizable(const DelaunayResult& D, int vinf, double tol)
{
    const Triangulation& T = D.metric.tri;
    const Subcomplex S = subcomplex_avoiding(T, vinf);
    const SubcomplexKind kind = classify_subcomplex(S);
    if (kind == SubcomplexKind::LinearGraph)
        return RealizableKind::TwoSided;
    if (kind != SubcomplexKind::DiskTriangulation)
        throw Error(ErrorCode::NotRealizable, "the triangulation avoiding vertex " + std::to_string(vinf) +
                                                  " is neither a path nor a disk");
    const std::vector<double> theta = kept_angle_sums(T, D.lambda_tilde, &S.triangle_kept);
    for (int v : S.vertices) {
        if (S.vertex_boundary[v]) {
            if (theta[v] > kPi + tol)
                throw Error(ErrorCode::NotRealizable, "boundary vertex " + std::to_string(v) +
                                                          " has angle sum " + std::to_string(theta[v]) + " > pi");
        } else if (std::abs(theta[v] - 2 * kPi) > tol) {
            throw Error(ErrorCode::NotRealizable, "interior vertex " + std::to_string(v) + " has angle sum " +
                                                      std::to_string(theta[v]) + " != 2 pi");
        }
    }
    return RealizableKind::Polyhedral;
}

PlanarLayout unfold_triangles(const Triangulation& T, const std::vector<double>& lambda, const std::vector<char>* kept)
{
    const int nt = T.num_triangles();
    PlanarLayout L;
    L.corner.assign(nt, {Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()});
    L.placed.assign(nt, 0);
    L.vertex.assign(T.num_vertices(), Eigen::Vector2d::Zero());
    L.vertex_placed.assign(T.num_vertices(), 0);

    double lmax = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < nt; ++t)
        if (!kept || (*kept)[t])
            for (int i = 0; i < 3; ++i)
                lmax = std::max(lmax, lambda[T.edge(3 * t + i)]);
    if (!std::isfinite(lmax))
        return L;
    L.length_scale = std::exp(-0.5 * lmax);
    auto len = [&](int h) { return std::exp(0.5 * (lambda[T.edge(h)] - lmax)); };

    std::vector<TriangleAngles> ang(nt);
    double best_area = -1;
    for (int t = 0; t < nt; ++t) {
        if (kept && !(*kept)[t])
            continue;
        ang[t] = angles_from_log_lengths(half_lambdas(T, lambda, t));
        const double area = 0.5 * len(3 * t) * len(3 * t + 2) * std::sin(ang[t].angle[1]);
        if (area > best_area) {
            best_area = area;
            L.seed_triangle = t;
        }
    }

    // Places corner k+2 of t given corners k and k+1.
    auto complete = [&](int t, int k) {
        const Eigen::Vector2d& P = L.corner[t][k];
        const Eigen::Vector2d& Q = L.corner[t][(k + 1) % 3];
        const Eigen::Vector2d dir = (Q - P).normalized();
        L.corner[t][(k + 2) % 3] = P + len(3 * t + (k + 2) % 3) * rotate(dir, ang[t].angle[(k + 1) % 3]);
    };

    std::deque<int> queue;
    const int s = L.seed_triangle;
    L.corner[s][0] = Eigen::Vector2d::Zero();
    L.corner[s][1] = Eigen::Vector2d(len(3 * s), 0.0);
    complete(s, 0);
    L.placed[s] = 1;
    queue.push_back(s);
    while (!queue.empty()) {
        const int t = queue.front();
        queue.pop_front();
        for (int i = 0; i < 3; ++i) {
            const int h = 3 * t + i, o = T.opp(h);
            const int tn = Triangulation::triangle_of(o);
            if (L.placed[tn] || (kept && !(*kept)[tn]))
                continue;
            const int k = o % 3;
            L.corner[tn][k] = L.corner[t][(i + 1) % 3];
            L.corner[tn][(k + 1) % 3] = L.corner[t][i];
            complete(tn, k);
            L.placed[tn] = 1;
            L.tree_edges.push_back(T.edge(h));
            queue.push_back(tn);
        }
    }

    Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
    Eigen::Vector2d hi = -lo;
    for (int t = 0; t < nt; ++t) {
        if (!L.placed[t])
            continue;
        for (int i = 0; i < 3; ++i) {
            const int v = T.tail(3 * t + i);
            const Eigen::Vector2d& p = L.corner[t][i];
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
            if (!L.vertex_placed[v]) {
                L.vertex[v] = p;
                L.vertex_placed[v] = 1;
            }
            const double want = len(3 * t + i);
            const double got = (L.corner[t][(i + 1) % 3] - p).norm();
            L.max_length_error = std::max(L.max_length_error, std::abs(got - want) / want);
        }
    }
    L.diameter = (hi - lo).norm();
    for (int t = 0; t < nt; ++t)
        if (L.placed[t])
            for (int i = 0; i < 3; ++i)
                L.closure_residual =
                    std::max(L.closure_residual, (L.corner[t][i] - L.vertex[T.tail(3 * t + i)]).norm());
    return L;
}

PlanarLayout layout_disk(const DelaunayResult& D, int vinf)
{
    const Triangulation& T = D.metric.tri;
    const Subcomplex S = subcomplex_avoiding(T, vinf);
    if (S.triangles.empty())
        throw Error(ErrorCode::WrongKind, "no triangles avoid vertex " + std::to_string(vinf));
    PlanarLayout L = unfold_triangles(T, D.lambda_tilde, &S.triangle_kept);
    for (int t : S.triangles)
        if (!L.placed[t])
            throw Error(ErrorCode::LayoutInconsistent, "kept triangles are not connected");
    if (L.closure_residual > 1e-8 * L.diameter)
        throw Error(ErrorCode::LayoutInconsistent,
                    "vertex stars do not close (residual " + std::to_string(L.closure_residual / L.diameter) +
                        " of the diameter)");
    if (L.max_length_error > 1e-9)
        throw Error(ErrorCode::LayoutInconsistent, "side lengths drift by " + std::to_string(L.max_length_error));
    return L;
}

Realization polyhedron_from_layout(const PlanarLayout& L, const DelaunayResult& D, int vinf)
{
    const Triangulation& T = D.metric.tri;
    if (classify_realizable(D, vinf) != RealizableKind::Polyhedral)
        throw Error(ErrorCode::WrongKind, "two-sided data has no polyhedron; use two_sided_polygon");
    const Subcomplex S = subcomplex_avoiding(T, vinf);
    const int n = T.num_vertices();

    // Canonical Moebius gauge: centroid at the origin, unit mean squared radius.
    Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
    for (int v : S.vertices)
        centroid += L.vertex[v];
    centroid /= static_cast<double>(S.vertices.size());
    double ms = 0.0;
    for (int v : S.vertices)
        ms += (L.vertex[v] - centroid).squaredNorm();
    const double scale = 1.0 / std::sqrt(ms / static_cast<double>(S.vertices.size()));

    Realization R;
    R.kind = RealizationKind::InscribedPolyhedron;
    R.planar.assign(n, Eigen::Vector2d::Zero());
    R.points.assign(n, Eigen::Vector3d(0, 0, 1));
    for (int v : S.vertices) {
        R.planar[v] = scale * (L.vertex[v] - centroid);
        R.points[v] = inverse_stereographic(R.planar[v]);
    }

    const std::vector<double> theta = kept_angle_sums(T, D.lambda_tilde, &S.triangle_kept);
    std::vector<char> nonessential(T.num_edges(), 0);
    for (int e : D.nonessential)
        nonessential[e] = 1;
    UnionFind uf(T.num_triangles());
    for (int e = 0; e < T.num_edges(); ++e) {
        const int h0 = T.half(e, 0), h1 = T.half(e, 1);
        const int t0 = Triangulation::triangle_of(h0), t1 = Triangulation::triangle_of(h1);
        if (S.edge_kept[e]) {
            if (nonessential[e] && S.triangle_kept[t0] && S.triangle_kept[t1])
                uf.unite(t0, t1);
            continue;
        }
        // An edge to vinf is flat when its other end has a straight boundary angle.
        const int b = T.tail(h0) == vinf ? T.head(h0) : T.tail(h0);
        if (b != vinf && std::abs(theta[b] - kPi) <= kAngleTolerance)
            uf.unite(t0, t1);
    }
    R.faces = face_cycles(T, uf);
    certify(R);
    if (R.sphere_residual > 1e-9 || R.planarity > 1e-8 || R.convexity_margin < -1e-8)
        throw Error(ErrorCode::ConvexityViolated,
                    "certification failed: sphere " + std::to_string(R.sphere_residual) + ", planarity " +
                        std::to_string(R.planarity) + ", convexity " + std::to_string(R.convexity_margin));
    R.metric = D.metric;
    R.lambda_tilde = D.lambda_tilde;
    R.theta_tilde = theta;
    return R;
}

Realization two_sided_polygon(const DelaunayResult& D, int vinf)
{
    const Triangulation& T = D.metric.tri;
    if (classify_realizable(D, vinf) != RealizableKind::TwoSided)
        throw Error(ErrorCode::WrongKind, "polyhedral data; use polyhedron_from_layout");
    const Subcomplex S = subcomplex_avoiding(T, vinf);
    const int n = T.num_vertices();

    // Walk the path from an end.
    std::vector<std::vector<std::pair<int, int>>> adj(n);
    for (int e : S.edges) {
        adj[T.v1(e)].push_back({T.v2(e), e});
        adj[T.v2(e)].push_back({T.v1(e), e});
    }
    int start = S.vertices.front();
    for (int v : S.vertices)
        if (adj[v].size() == 1) {
            start = v;
            break;
        }
    std::vector<int> order{start};
    std::vector<double> x{0.0};
    double lmax = -std::numeric_limits<double>::infinity();
    for (int e : S.edges)
        lmax = std::max(lmax, D.lambda_tilde[e]);
    int prev = -1, cur = start;
    while (true) {
        int nxt = -1, via = -1;
        for (auto [w, e] : adj[cur])
            if (w != prev) {
                nxt = w;
                via = e;
            }
        if (nxt < 0 || static_cast<int>(order.size()) == static_cast<int>(S.vertices.size()))
            break;
        x.push_back(x.back() + std::exp(0.5 * (D.lambda_tilde[via] - lmax)));
        order.push_back(nxt);
        prev = cur;
        cur = nxt;
    }

    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double ms = 0.0;
    for (double& xi : x) {
        xi -= mean;
        ms += xi * xi;
    }
    const double scale = 1.0 / std::sqrt(ms / static_cast<double>(x.size()));

    Realization R;
    R.kind = RealizationKind::TwoSidedPolygon;
    R.planar.assign(n, Eigen::Vector2d::Zero());
    R.points.assign(n, Eigen::Vector3d(0, 0, 1));
    for (std::size_t i = 0; i < order.size(); ++i) {
        R.planar[order[i]] = Eigen::Vector2d(scale * x[i], 0.0);
        R.points[order[i]] = inverse_stereographic(R.planar[order[i]]);
    }
    std::vector<int> face = order;
    face.push_back(vinf);
    R.faces.push_back(face);
    std::reverse(face.begin(), face.end());
    R.faces.push_back(face);
    for (const auto& p : R.points)
        R.sphere_residual = std::max(R.sphere_residual, std::abs(p.norm() - 1.0));
    R.metric = D.metric;
    R.lambda_tilde = D.lambda_tilde;
    return R;
}

Realization uniformize_sphere(const DecoratedMetric& M, int vinf, const SolveOptions& opts)
{
    SolveReport rep = minimize_e_bar(M, vinf, opts);
    const DelaunayResult& D = rep.final_evaluation.delaunay;
    Realization R;
    if (classify_realizable(D, vinf) == RealizableKind::TwoSided) {
        R = two_sided_polygon(D, vinf);
    } else {
        const PlanarLayout L = layout_disk(D, vinf);
        R = polyhedron_from_layout(L, D, vinf);
    }
    R.solve = std::move(rep);
    return R;
}

std::complex<double> reduce_lattice(Eigen::Vector2d& w1, Eigen::Vector2d& w2)
{
    const double det = w1.x() * w2.y() - w1.y() * w2.x();
    if (!(std::abs(det) > 0))
        throw Error(ErrorCode::LayoutInconsistent, "lattice basis is degenerate");
    if (w1.squaredNorm() > w2.squaredNorm())
        std::swap(w1, w2);
    for (int it = 0; it < 1000; ++it) {
        const double mu = std::round(w1.dot(w2) / w1.squaredNorm());
        w2 -= mu * w1;
        if (w2.squaredNorm() < w1.squaredNorm() * (1 - 1e-14))
            std::swap(w1, w2);
        else
            break;
    }
    std::complex<double> z1(w1.x(), w1.y()), z2(w2.x(), w2.y());
    std::complex<double> tau = z2 / z1;
    if (tau.imag() < 0) {
        z2 = -z2;
        tau = -tau;
    }
    // Boundary of the fundamental domain: keep Re tau in (-1/2, 1/2] and, on the
    // unit circle, Re tau >= 0.
    if (tau.real() < -0.5 + 1e-12) {
        z2 += z1;
        tau += 1.0;
    }
    if (std::abs(std::abs(tau) - 1.0) < 1e-12 && tau.real() < 0) {
        std::swap(z1, z2);
        z2 = -z2;
        tau = z2 / z1;
    }
    const double covolume = std::abs(z1.real() * z2.imag() - z1.imag() * z2.real());
    const double s = 1.0 / std::sqrt(covolume);
    const std::complex<double> rot = std::conj(z1) / std::abs(z1);
    z1 *= rot * s;
    z2 *= rot * s;
    w1 = {z1.real(), z1.imag()};
    w2 = {z2.real(), z2.imag()};
    return tau;
}

Realization uniformize_torus(const DecoratedMetric& M, const SolveOptions& opts)
{
    const Triangulation& T0 = M.tri;
    if (T0.genus() != 1)
        throw Error(ErrorCode::WrongGenus, "need a torus, got genus " + std::to_string(T0.genus()));
    ConeAngleTarget flat{std::vector<double>(T0.num_vertices(), 2 * kPi)};
    SolveReport rep = minimize_e_theta(M, flat, opts);
    const DelaunayResult& D = rep.final_evaluation.delaunay;
    const Triangulation& T = D.metric.tri;
    const PlanarLayout L = unfold_triangles(T, D.lambda_tilde);
    if (L.max_length_error > 1e-9)
        throw Error(ErrorCode::LayoutInconsistent, "side lengths drift by " + std::to_string(L.max_length_error));

    // Edges not crossed while unfolding; a spanning tree of them among the
    // vertices leaves exactly two, whose translations generate the deck group.
    std::vector<char> crossed(T.num_edges(), 0);
    for (int e : L.tree_edges)
        crossed[e] = 1;
    std::vector<Eigen::Vector2d> translation(T.num_edges(), Eigen::Vector2d::Zero());
    double deck = 0.0;
    UnionFind uf(T.num_vertices());
    std::vector<int> leftover;
    for (int e = 0; e < T.num_edges(); ++e) {
        if (crossed[e])
            continue;
        const int h = T.half(e, 0), o = T.half(e, 1);
        const int t = Triangulation::triangle_of(h), tn = Triangulation::triangle_of(o);
        const Eigen::Vector2d a = L.corner[tn][o % 3] - L.corner[t][(h + 1) % 3];
        const Eigen::Vector2d b = L.corner[tn][(o + 1) % 3] - L.corner[t][h % 3];
        translation[e] = 0.5 * (a + b);
        deck = std::max(deck, (a - b).norm());
        if (!uf.unite(T.v1(e), T.v2(e)))
            leftover.push_back(e);
    }
    if (leftover.size() != 2)
        throw Error(ErrorCode::InternalInconsistency, "cut graph has " + std::to_string(leftover.size()) +
                                                          " independent cycles, expected 2");
    Eigen::Vector2d w1 = translation[leftover[0]], w2 = translation[leftover[1]];
    // Every translation must be an integer combination of the basis.
    Eigen::Matrix2d B;
    B << w1, w2;
    const Eigen::Matrix2d Binv = B.inverse();
    for (int e = 0; e < T.num_edges(); ++e) {
        if (crossed[e])
            continue;
        const Eigen::Vector2d c = Binv * translation[e];
        const Eigen::Vector2d r = B * (c - c.array().round().matrix());
        deck = std::max(deck, r.norm());
    }
    if (deck > 1e-8 * L.diameter)
        throw Error(ErrorCode::LayoutInconsistent, "deck transformations disagree by " + std::to_string(deck));

    Realization R;
    R.kind = RealizationKind::FlatTorus;
    R.deck_residual = deck / L.diameter;
    const double covolume = std::abs(w1.x() * w2.y() - w1.y() * w2.x());
    R.tau = reduce_lattice(w1, w2);
    R.omega1 = w1;
    R.omega2 = w2;
    // Layout positions in the unit-covolume scale (not rotated).
    const double s = 1.0 / std::sqrt(covolume);
    R.planar.resize(T.num_vertices());
    for (int v = 0; v < T.num_vertices(); ++v)
        R.planar[v] = s * L.vertex[v];
    for (int t = 0; t < T.num_triangles(); ++t)
        R.faces.push_back({T.tail(3 * t), T.tail(3 * t + 1), T.tail(3 * t + 2)});
    R.metric = make_metric(T, D.lambda_tilde);
    R.theta_tilde = rep.final_evaluation.theta_tilde;
    R.solve = std::move(rep);
    return R;
}

Realization prescribe_cone_angles(const DecoratedMetric& M, const ConeAngleTarget& theta, const SolveOptions& opts)
{
    for (double x : theta.theta)
        if (!(x > 0))
            throw Error(ErrorCode::InvalidInput, "cone angles must be positive");
    SolveReport rep = minimize_e_theta(M, theta, opts);
    Realization R;
    R.kind = RealizationKind::ConeMetric;
    const DelaunayResult& D = rep.final_evaluation.delaunay;
    R.metric = make_metric(D.metric.tri, D.lambda_tilde);
    R.theta_tilde = rep.final_evaluation.theta_tilde;
    for (int t = 0; t < D.metric.tri.num_triangles(); ++t)
        R.faces.push_back({D.metric.tri.tail(3 * t), D.metric.tri.tail(3 * t + 1), D.metric.tri.tail(3 * t + 2)});
    R.solve = std::move(rep);
    return R;
}

double absolute_cross_ratio(const Eigen::Vector3d& p, const Eigen::Vector3d& q, const Eigen::Vector3d& r,
                            const Eigen::Vector3d& s)
{
    return (p - r).norm() * (q - s).norm() / ((p - s).norm() * (q - r).norm());
}

} // namespace uniformize
