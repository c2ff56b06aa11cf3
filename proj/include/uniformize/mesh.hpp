#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace uniformize {

/// One side of one triangle.
struct SideRef {
    int triangle = 0;
    int side = 0;
    bool operator==(const SideRef&) const = default;
};

/// A gluing of two triangle sides.  The default (reversing) gluing identifies the
/// sides with opposite orientation, which is what an oriented surface needs.
struct Gluing {
    SideRef a;
    SideRef b;
    bool reversing = true;
};

/// Combinatorial triangulation of a closed oriented surface with marked points.
///
/// Halfedge h = 3*t + i denotes side i of triangle t, running from corner i to
/// corner (i+1)%3.  The same index also names corner i of t, whose vertex is
/// tail(h).  Edge ids are the indices of the gluing records that created them;
/// vertex ids are assigned in order of the first corner (scanning halfedges in
/// increasing order) that belongs to each vertex.  Both kinds of ids are stable
/// under flip_in_place.
class Triangulation {
public:
    Triangulation() = default;

    static Triangulation build(int num_triangles, const std::vector<Gluing>& gluings,
                               std::optional<int> genus_hint = std::nullopt);

    int num_triangles() const { return static_cast<int>(opp_.size()) / 3; }
    int num_halfedges() const { return static_cast<int>(opp_.size()); }
    int num_edges() const { return static_cast<int>(edge_half_.size()); }
    int num_vertices() const { return static_cast<int>(vertex_corner_.size()); }
    int euler_characteristic() const { return num_vertices() - num_edges() + num_triangles(); }
    int genus() const { return (2 - euler_characteristic()) / 2; }

    static int triangle_of(int h) { return h / 3; }
    static int next(int h) { return h - h % 3 + (h % 3 + 1) % 3; }
    static int prev(int h) { return h - h % 3 + (h % 3 + 2) % 3; }

    int opp(int h) const { return opp_[h]; }
    int edge(int h) const { return edge_[h]; }
    int tail(int h) const { return tail_[h]; }
    int head(int h) const { return tail_[next(h)]; }
    int half(int e, int k) const { return edge_half_[e][k]; }
    int v1(int e) const { return tail_[edge_half_[e][0]]; }
    int v2(int e) const { return head(edge_half_[e][0]); }

    /// The corner after c in the cyclic order around its vertex.
    int next_corner(int c) const { return next(opp_[c]); }
    /// Corners at v in cyclic order, starting from a fixed representative.
    std::vector<int> corners_at(int v) const;
    int some_corner(int v) const { return vertex_corner_.at(v); }

    /// The gluing list that rebuilds this triangulation with the same edge ids.
    std::vector<Gluing> gluings() const;

    /// Flip edge e in place.  The new diagonal keeps id e; the triangles of the
    /// two sides of e are reused.  Throws DegenerateFlip if both sides of e lie in
    /// the same triangle.
    void flip_in_place(int e);

    /// Rename vertices: vertex v becomes new_id[v].  new_id must be a permutation.
    void permute_vertices(const std::vector<int>& new_id);

    /// Check all structural invariants; throws on violation.  Used by tests.
    void validate() const;

private:
    std::vector<int> opp_;
    std::vector<int> edge_;
    std::vector<int> tail_;
    std::vector<std::array<int, 2>> edge_half_;
    std::vector<int> vertex_corner_;
};

/// Build from vertex triples (counterclockwise faces).  Vertex ids are the given
/// indices; edges are numbered by first appearance scanning faces and sides.
/// Throws OpenMesh for boundary or non-manifold input, NonOrientable for
/// inconsistently oriented faces.
Triangulation build_from_faces(int num_vertices, const std::vector<std::array<int, 3>>& faces);

/// Functional flip: returns a copy with e flipped.
Triangulation flip_edge(const Triangulation& T, int e);

/// Orientation-preserving combinatorial isomorphism test.  With respect_labels
/// the isomorphism must also preserve edge and vertex ids.
bool isomorphic(const Triangulation& A, const Triangulation& B, bool respect_labels = false);

/// The closed cells of a triangulation not incident with a removed vertex.
struct Subcomplex {
    Triangulation parent;
    int removed_vertex = -1;
    std::vector<char> vertex_kept, edge_kept, triangle_kept;
    std::vector<char> vertex_boundary; // kept vertex with a corner outside the kept triangles
    std::vector<char> edge_boundary;   // kept edge with fewer than two sides in kept triangles
    std::vector<int> vertices, edges, triangles;
};

enum class SubcomplexKind { LinearGraph, DiskTriangulation, Other };

const char* kind_name(SubcomplexKind k);

Subcomplex subcomplex_avoiding(const Triangulation& T, int vinf);

/// (edge-end count, corner count) at v, optionally restricted to S.
std::pair<int, int> vertex_degrees(const Triangulation& T, const Subcomplex* S, int v);

SubcomplexKind classify_subcomplex(const Subcomplex& S);

} // namespace uniformize
