#include "support/surfaces.hpp"

#include "uniformize/errors.hpp"

#include <cmath>
#include <numbers>

namespace uniformize::testing {

namespace {
constexpr double kPi = std::numbers::pi;
}

Triangulation sphere3_tri()
{
    // t0 = (a, b, c), t1 = (a, c, b).
    return Triangulation::build(2, {{{0, 0}, {1, 2}}, {{0, 1}, {1, 1}}, {{0, 2}, {1, 0}}});
}

DecoratedMetric sphere3(double lambda)
{
    return make_metric(sphere3_tri(), std::vector<double>(3, lambda));
}

Triangulation torus1_tri()
{
    // Unit square: t0 = (p00, p10, p11), t1 = (p00, p11, p01).
    return Triangulation::build(2, {{{0, 0}, {1, 1}}, {{0, 1}, {1, 2}}, {{0, 2}, {1, 0}}});
}

DecoratedMetric flat_torus(double a, double b)
{
    const double h = 1.0, v = std::hypot(a, b), d = std::hypot(1.0 + a, b);
    return make_metric(torus1_tri(), {2 * std::log(h), 2 * std::log(v), 2 * std::log(d)});
}

DecoratedMetric tetrahedron()
{
    const Triangulation T = build_from_faces(4, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}});
    return make_metric(T, std::vector<double>(T.num_edges(), 0.0));
}

std::vector<Eigen::Vector3d> octahedron_points()
{
    return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
}

std::vector<std::array<int, 3>> octahedron_faces()
{
    return {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
}

DecoratedMetric octahedron()
{
    const Triangulation T = build_from_faces(6, octahedron_faces());
    return make_metric(T, std::vector<double>(T.num_edges(), 0.0));
}

Triangulation genus2_tri()
{
    // Octagon P0..P7 with sides s_j = P_j -> P_{j+1} labelled a b a^-1 b^-1 c d c^-1 d^-1,
    // fanned from P0 into triangles (P0, P_k, P_{k+1}), k = 1..6.
    auto side = [](int j) -> SideRef {
        if (j == 0)
            return {0, 0};
        if (j == 7)
            return {5, 2};
        return {j - 1, 1};
    };
    std::vector<Gluing> g;
    for (int k = 2; k <= 6; ++k)
        g.push_back({{k - 2, 2}, {k - 1, 0}});
    g.push_back({side(0), side(2)});
    g.push_back({side(1), side(3)});
    g.push_back({side(4), side(6)});
    g.push_back({side(5), side(7)});
    return Triangulation::build(6, g);
}

DecoratedMetric split_triangle(const DecoratedMetric& M, int t, const std::array<double, 3>& new_lambda)
{
    const Triangulation& T = M.tri;
    const int nt = T.num_triangles();
    const int t1 = nt, t2 = nt + 1;
    // Triangle t keeps side 0; side 1 moves to t1 and side 2 to t2 (as their side 0).
    auto moved = [&](SideRef s) -> SideRef {
        if (s.triangle != t || s.side == 0)
            return s;
        return {s.side == 1 ? t1 : t2, 0};
    };
    std::vector<Gluing> g = T.gluings();
    for (auto& x : g) {
        x.a = moved(x.a);
        x.b = moved(x.b);
    }
    std::vector<double> lambda = M.lambda;
    // New edges: to corner 1 (B), corner 2 (C), corner 0 (A).
    g.push_back({{t, 1}, {t1, 2}});
    lambda.push_back(new_lambda[1]);
    g.push_back({{t1, 1}, {t2, 2}});
    lambda.push_back(new_lambda[2]);
    g.push_back({{t2, 1}, {t, 2}});
    lambda.push_back(new_lambda[0]);
    return make_metric(Triangulation::build(nt + 2, g), std::move(lambda));
}

DecoratedMetric random_surface(int genus, int n, std::mt19937_64& rng, double spread, int flips_per_edge)
{
    std::uniform_real_distribution<double> U(-spread, spread);
    DecoratedMetric M = genus == 0   ? sphere3()
                        : genus == 1 ? make_metric(torus1_tri(), std::vector<double>(3, 0.0))
                                     : make_metric(genus2_tri(), std::vector<double>(9, 0.0));
    while (M.tri.num_vertices() < n) {
        std::uniform_int_distribution<int> pick(0, M.tri.num_triangles() - 1);
        M = split_triangle(M, pick(rng), {0.0, 0.0, 0.0});
    }
    Triangulation T = M.tri;
    std::uniform_int_distribution<int> pick_edge(0, T.num_edges() - 1);
    const int flips = flips_per_edge * T.num_edges();
    for (int k = 0; k < flips; ++k) {
        const int e = pick_edge(rng);
        const int h0 = T.half(e, 0), h1 = T.half(e, 1);
        if (Triangulation::triangle_of(h0) == Triangulation::triangle_of(h1))
            continue;
        const int a = T.tail(h0), b = T.head(h0);
        const int da = static_cast<int>(T.corners_at(a).size()), db = static_cast<int>(T.corners_at(b).size());
        if (a == b ? da - 2 < 3 : (da - 1 < 3 || db - 1 < 3))
            continue;
        T.flip_in_place(e);
    }
    std::vector<double> lambda(T.num_edges());
    for (double& x : lambda)
        x = U(rng);
    return make_metric(std::move(T), std::move(lambda));
}

DecoratedMetric perturbed(const DecoratedMetric& M, std::mt19937_64& rng, double amount)
{
    std::uniform_real_distribution<double> U(-amount, amount);
    std::vector<double> lambda = M.lambda;
    for (double& x : lambda)
        x += U(rng);
    return make_metric(M.tri, std::move(lambda));
}

DecoratedMetric grid_torus(int k, double a, double b)
{
    const Eigen::Vector2d w1(1.0 / k, 0.0), w2(a / k, b / k);
    auto id = [k](int i, int j) { return (i % k) + k * (j % k); };
    std::vector<std::array<int, 3>> faces;
    std::vector<std::array<Eigen::Vector2d, 3>> pos;
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) {
            const Eigen::Vector2d p = i * w1 + j * w2;
            faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            pos.push_back({p, p + w1, p + w1 + w2});
            faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
            pos.push_back({p, p + w1 + w2, p + w2});
        }
    const Triangulation T = build_from_faces(k * k, faces);
    std::vector<double> lambda(T.num_edges());
    for (int t = 0; t < T.num_triangles(); ++t)
        for (int i = 0; i < 3; ++i)
            lambda[T.edge(3 * t + i)] = 2 * std::log((pos[t][(i + 1) % 3] - pos[t][i]).norm());
    return make_metric(T, std::move(lambda));
}

std::vector<double> random_cone_angles(const Triangulation& T, std::mt19937_64& rng, double spread)
{
    std::uniform_real_distribution<double> U(-spread, spread);
    const int n = T.num_vertices();
    const double total = 2 * kPi * (n - T.euler_characteristic());
    std::vector<double> w(n);
    double sum = 0.0;
    for (double& x : w) {
        x = 1.0 + U(rng);
        sum += x;
    }
    for (double& x : w)
        x *= total / sum;
    return w;
}

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x, double h)
{
    Eigen::VectorXd g(x.size());
    for (int i = 0; i < x.size(); ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(xp) - f(xm)) / (2 * h);
    }
    return g;
}

} // namespace uniformize::testing
