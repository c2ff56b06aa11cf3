#include <doctest.h>

#include "support/surfaces.hpp"
#include "uniformize/errors.hpp"
#include "uniformize/penner.hpp"

#include <cmath>
#include <random>

using namespace uniformize;
using namespace uniformize::testing;

TEST_CASE("arc lengths and lambda are inverse")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-3, 3);
    for (int k = 0; k < 50; ++k) {
        const std::array<double, 3> l{U(rng), U(rng), U(rng)};
        const auto back = lambda_from_arcs(arc_lengths(l));
        for (int i = 0; i < 3; ++i)
            CHECK(back[i] == doctest::Approx(l[i]).epsilon(1e-13));
    }
    // Equal lambda gives arcs exp(-lambda/2).
    const auto a = arc_lengths({0.4, 0.4, 0.4});
    CHECK(a[0] == doctest::Approx(std::exp(-0.2)));
}

TEST_CASE("horocycle length of the zero torus")
{
    const DecoratedMetric M = make_metric(torus1_tri(), {0, 0, 0});
    CHECK(horocycle_length(M, 0) == doctest::Approx(6.0));
    CHECK(log_horocycle_length(M, 0) == doctest::Approx(std::log(6.0)));
}

TEST_CASE("fiber shift scales horocycles")
{
    std::mt19937_64 rng(2);
    const DecoratedMetric M = random_surface(0, 8, rng);
    std::uniform_real_distribution<double> U(-1, 1);
    std::vector<double> u(8);
    for (double& x : u)
        x = U(rng);
    const DecoratedMetric N = fiber_shift(M, u);
    for (int v = 0; v < 8; ++v)
        CHECK(log_horocycle_length(N, v) == doctest::Approx(log_horocycle_length(M, v) - u[v]).epsilon(1e-12));
    // Adding h to every lambda shrinks every horocycle by exp(-h/2).
    std::vector<double> lam = M.lambda;
    for (double& x : lam)
        x += 0.8;
    const DecoratedMetric P = make_metric(M.tri, lam);
    for (int v = 0; v < 8; ++v)
        CHECK(log_horocycle_length(P, v) == doctest::Approx(log_horocycle_length(M, v) - 0.4).epsilon(1e-12));
}

TEST_CASE("Ptolemy relation")
{
    const double la = 0.3, lb = -0.2, lc = 1.1, ld = 0.05, le = 0.4;
    const double lf = ptolemy_update(la, lb, lc, ld, le);
    auto ell = [](double x) { return std::exp(x / 2); };
    CHECK(ell(le) * ell(lf) == doctest::Approx(ell(la) * ell(lc) + ell(lb) * ell(ld)).epsilon(1e-14));
    // Stable for large arguments.
    CHECK(std::isfinite(ptolemy_update(800, 801, 799, 802, -700)));
}

TEST_CASE("flips preserve horocycle lengths and undo themselves")
{
    std::mt19937_64 rng(3);
    for (int genus : {0, 1}) {
        const DecoratedMetric M = random_surface(genus, 10, rng);
        Triangulation T = M.tri;
        std::vector<double> lam = M.lambda;
        std::uniform_int_distribution<int> pick(0, T.num_edges() - 1);
        for (int k = 0; k < 100; ++k) {
            const int e = pick(rng);
            if (Triangulation::triangle_of(T.half(e, 0)) == Triangulation::triangle_of(T.half(e, 1)))
                continue;
            const std::vector<double> before = lam;
            const Triangulation Tb = T;
            ptolemy_flip(T, lam, e);
            {
                Triangulation T2 = T;
                std::vector<double> l2 = lam;
                ptolemy_flip(T2, l2, e);
                CHECK(isomorphic(T2, Tb, true));
                CHECK(std::abs(l2[e] - before[e]) < 1e-10);
            }
        }
        const DecoratedMetric N = make_metric(T, lam);
        for (int v = 0; v < M.tri.num_vertices(); ++v)
            CHECK(log_horocycle_length(N, v) == doctest::Approx(log_horocycle_length(M, v)).epsilon(1e-10));
    }
}

TEST_CASE("shear coordinates sum to zero around each vertex and determine lambda")
{
    std::mt19937_64 rng(4);
    for (int genus : {0, 1}) {
        const DecoratedMetric M = random_surface(genus, 9, rng);
        const ShearCoordinates S = shear_from_penner(M);
        const Triangulation& T = M.tri;
        for (int v = 0; v < T.num_vertices(); ++v) {
            double s = 0;
            for (int c : T.corners_at(v))
                s += S.sigma[T.edge(c)];
            CHECK(std::abs(s) < 1e-12);
        }
        std::vector<double> anchors(T.num_vertices());
        for (int v = 0; v < T.num_vertices(); ++v)
            anchors[v] = std::exp(corner_log_arc(T, M.lambda, T.some_corner(v)));
        const DecoratedMetric back = penner_from_shear(S, anchors);
        for (int e = 0; e < T.num_edges(); ++e)
            CHECK(back.lambda[e] == doctest::Approx(M.lambda[e]).epsilon(1e-10));
        const ShearCoordinates again = shear_from_penner(back);
        for (int e = 0; e < T.num_edges(); ++e)
            CHECK(std::abs(again.sigma[e] - S.sigma[e]) < 1e-8);
    }
}

TEST_CASE("shears that do not close up are rejected")
{
    const Triangulation T = sphere3_tri();
    ShearCoordinates S{T, {0.5, 0.0, 0.0}};
    try {
        penner_from_shear(S, {1, 1, 1});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IncompatibleShear);
    }
}

TEST_CASE("metric construction checks sizes")
{
    CHECK_THROWS_AS(make_metric(sphere3_tri(), {0, 0}), Error);
    CHECK_THROWS_AS(make_metric(sphere3_tri(), {0, 0, std::nan("")}), Error);
}
