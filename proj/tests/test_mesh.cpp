#include <doctest.h>

#include "support/surfaces.hpp"
#include "uniformize/errors.hpp"
#include "uniformize/mesh.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace uniformize;
using namespace uniformize::testing;

namespace {

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InternalInconsistency;
}

} // namespace

TEST_CASE("minimal triangulations have the expected counts")
{
    const Triangulation s = sphere3_tri();
    CHECK(s.num_vertices() == 3);
    CHECK(s.num_edges() == 3);
    CHECK(s.genus() == 0);

    const Triangulation t = torus1_tri();
    CHECK(t.num_vertices() == 1);
    CHECK(t.num_edges() == 3);
    CHECK(t.genus() == 1);
    CHECK(t.corners_at(0).size() == 6);

    const Triangulation g = genus2_tri();
    CHECK(g.num_vertices() == 1);
    CHECK(g.num_edges() == 9);
    CHECK(g.genus() == 2);
    CHECK(g.euler_characteristic() == -2);
}

TEST_CASE("halfedge navigation")
{
    const Triangulation T = octahedron().tri;
    for (int h = 0; h < T.num_halfedges(); ++h) {
        CHECK(T.opp(T.opp(h)) == h);
        CHECK(T.head(h) == T.tail(T.opp(h)));
        CHECK(Triangulation::next(Triangulation::next(Triangulation::next(h))) == h);
        CHECK(Triangulation::prev(Triangulation::next(h)) == h);
    }
    int corners = 0;
    for (int v = 0; v < T.num_vertices(); ++v) {
        for (int c : T.corners_at(v))
            CHECK(T.tail(c) == v);
        corners += static_cast<int>(T.corners_at(v).size());
    }
    CHECK(corners == 3 * T.num_triangles());
    CHECK(code_of([&] { T.corners_at(6); }) == ErrorCode::UnknownVertex);
}

TEST_CASE("gluing validation")
{
    // Side glued twice.
    CHECK(code_of([] { Triangulation::build(2, {{{0, 0}, {1, 2}}, {{0, 0}, {1, 1}}, {{0, 2}, {1, 0}}}); }) ==
          ErrorCode::UnmatchedSide);
    // Missing side.
    CHECK(code_of([] { Triangulation::build(2, {{{0, 0}, {1, 2}}, {{0, 1}, {1, 1}}}); }) ==
          ErrorCode::UnmatchedSide);
    // Orientation-preserving gluing.
    CHECK(code_of([] { Triangulation::build(2, {{{0, 0}, {1, 2}, false}, {{0, 1}, {1, 1}}, {{0, 2}, {1, 0}}}); }) ==
          ErrorCode::NonOrientable);
    // Genus hint that does not fit.
    CHECK(code_of([] { Triangulation::build(2, {{{0, 0}, {1, 2}}, {{0, 1}, {1, 1}}, {{0, 2}, {1, 0}}}, 1); }) ==
          ErrorCode::EulerMismatch);
    // Side index out of range.
    CHECK(code_of([] { Triangulation::build(2, {{{0, 3}, {1, 2}}, {{0, 1}, {1, 1}}, {{0, 2}, {1, 0}}}); }) ==
          ErrorCode::InvalidInput);
}

TEST_CASE("faces with a boundary or inconsistent orientation are rejected")
{
    CHECK(code_of([] { build_from_faces(4, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}}); }) == ErrorCode::OpenMesh);
    CHECK(code_of([] { build_from_faces(4, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 2, 3}}); }) ==
          ErrorCode::NonOrientable);
}

TEST_CASE("build_from_faces keeps the given vertex ids")
{
    const Triangulation T = build_from_faces(6, octahedron_faces());
    const auto faces = octahedron_faces();
    for (int t = 0; t < T.num_triangles(); ++t)
        for (int i = 0; i < 3; ++i)
            CHECK(T.tail(3 * t + i) == faces[t][i]);
}

TEST_CASE("flips preserve validity and edge ids")
{
    std::mt19937_64 rng(3);
    for (int genus : {0, 1, 2}) {
        const DecoratedMetric M = random_surface(genus, 12, rng);
        Triangulation T = M.tri;
        std::uniform_int_distribution<int> pick(0, T.num_edges() - 1);
        for (int k = 0; k < 200; ++k) {
            const int e = pick(rng);
            if (Triangulation::triangle_of(T.half(e, 0)) == Triangulation::triangle_of(T.half(e, 1)))
                continue;
            const Triangulation before = T;
            T.flip_in_place(e);
            T.validate();
            CHECK(T.num_edges() == before.num_edges());
            CHECK(T.num_vertices() == before.num_vertices());
            // Flipping back gives the same combinatorics.
            CHECK(isomorphic(flip_edge(T, e), before, true));
        }
    }
}

TEST_CASE("flip inside a single triangle is degenerate")
{
    // A vertex of degree one sits in a self-folded triangle.
    std::mt19937_64 rng(4);
    Triangulation T = sphere3_tri();
    T.flip_in_place(0);
    bool found = false;
    for (int e = 0; e < T.num_edges(); ++e) {
        if (Triangulation::triangle_of(T.half(e, 0)) == Triangulation::triangle_of(T.half(e, 1))) {
            CHECK(code_of([&] { T.flip_in_place(e); }) == ErrorCode::DegenerateFlip);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("isomorphism detects relabeling")
{
    const Triangulation A = octahedron().tri;
    Triangulation B = A;
    std::vector<int> perm{3, 5, 1, 0, 2, 4};
    B.permute_vertices(perm);
    CHECK(isomorphic(A, B, false));
    CHECK_FALSE(isomorphic(A, B, true));
    CHECK_FALSE(isomorphic(A, tetrahedron().tri, false));
}

TEST_CASE("subcomplex avoiding a vertex")
{
    const Triangulation oct = octahedron().tri;
    const Subcomplex S = subcomplex_avoiding(oct, 4);
    CHECK(classify_subcomplex(S) == SubcomplexKind::DiskTriangulation);
    CHECK(S.triangles.size() == 4);
    CHECK(S.vertices.size() == 5);
    CHECK(std::count(S.vertex_boundary.begin(), S.vertex_boundary.end(), 1) == 4);
    const auto [deg1, deg2] = vertex_degrees(oct, &S, 5);
    CHECK(deg1 == 4);
    CHECK(deg2 == 4);

    const Subcomplex P = subcomplex_avoiding(sphere3_tri(), 0);
    CHECK(classify_subcomplex(P) == SubcomplexKind::LinearGraph);
    CHECK(P.edges.size() == 1);

    const Subcomplex Q = subcomplex_avoiding(tetrahedron().tri, 0);
    CHECK(classify_subcomplex(Q) == SubcomplexKind::DiskTriangulation);
    CHECK(Q.triangles.size() == 1);
}
