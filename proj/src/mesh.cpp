#include "uniformize/mesh.hpp"

#include "uniformize/errors.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <string>

namespace uniformize {

namespace {

std::string side_str(const SideRef& s)
{
    return "(" + std::to_string(s.triangle) + "," + std::to_string(s.side) + ")";
}

} // namespace

Triangulation Triangulation::build(int num_triangles, const std::vector<Gluing>& gluings,
                                   std::optional<int> genus_hint)
{
    if (num_triangles <= 0)
        throw Error(ErrorCode::InvalidInput, "a triangulation needs at least one triangle");
    const int H = 3 * num_triangles;
    Triangulation T;
    T.opp_.assign(H, -1);
    T.edge_.assign(H, -1);
    T.tail_.assign(H, -1);
    T.edge_half_.resize(gluings.size());

    for (size_t k = 0; k < gluings.size(); ++k) {
        const Gluing& g = gluings[k];
        for (const SideRef* s : {&g.a, &g.b}) {
            if (s->triangle < 0 || s->triangle >= num_triangles || s->side < 0 || s->side > 2)
                throw Error(ErrorCode::InvalidInput, "side " + side_str(*s) + " out of range");
        }
        if (!g.reversing)
            throw Error(ErrorCode::NonOrientable,
                        "gluing " + side_str(g.a) + "-" + side_str(g.b) + " preserves side orientation");
        const int ha = 3 * g.a.triangle + g.a.side;
        const int hb = 3 * g.b.triangle + g.b.side;
        if (ha == hb)
            throw Error(ErrorCode::InvalidInput, "side " + side_str(g.a) + " glued to itself");
        if (T.opp_[ha] != -1 || T.opp_[hb] != -1)
            throw Error(ErrorCode::UnmatchedSide,
                        "side " + side_str(T.opp_[ha] != -1 ? g.a : g.b) + " appears in two gluings");
        T.opp_[ha] = hb;
        T.opp_[hb] = ha;
        T.edge_[ha] = T.edge_[hb] = static_cast<int>(k);
        T.edge_half_[k] = {ha, hb};
    }
    for (int h = 0; h < H; ++h) {
        if (T.opp_[h] == -1)
            throw Error(ErrorCode::UnmatchedSide, "side " + side_str({h / 3, h % 3}) + " is not glued");
    }

    // Vertices are the cycles of the corner permutation c -> next(opp(c)).
    for (int h = 0; h < H; ++h) {
        if (T.tail_[h] != -1)
            continue;
        const int id = static_cast<int>(T.vertex_corner_.size());
        T.vertex_corner_.push_back(h);
        int c = h;
        do {
            T.tail_[c] = id;
            c = T.next_corner(c);
        } while (c != h);
    }

    // Connectedness.
    std::vector<char> seen(num_triangles, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int t = stack.back();
        stack.pop_back();
        for (int i = 0; i < 3; ++i) {
            const int u = triangle_of(T.opp_[3 * t + i]);
            if (!seen[u]) {
                seen[u] = 1;
                ++count;
                stack.push_back(u);
            }
        }
    }
    if (count != num_triangles)
        throw Error(ErrorCode::InvalidInput, "the gluing defines a disconnected surface");

    if (genus_hint && 2 - 2 * *genus_hint != T.euler_characteristic())
        throw Error(ErrorCode::EulerMismatch,
                    "Euler characteristic " + std::to_string(T.euler_characteristic()) +
                        " does not match genus " + std::to_string(*genus_hint));
    return T;
}

std::vector<int> Triangulation::corners_at(int v) const
{
    if (v < 0 || v >= num_vertices())
        throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(v));
    std::vector<int> out;
    const int start = vertex_corner_[v];
    int c = start;
    do {
        out.push_back(c);
        c = next_corner(c);
    } while (c != start);
    return out;
}

std::vector<Gluing> Triangulation::gluings() const
{
    std::vector<Gluing> out;
    out.reserve(edge_half_.size());
    for (const auto& hh : edge_half_)
        out.push_back({{hh[0] / 3, hh[0] % 3}, {hh[1] / 3, hh[1] % 3}, true});
    return out;
}

void Triangulation::flip_in_place(int e)
{
    if (e < 0 || e >= num_edges())
        throw Error(ErrorCode::InvalidInput, "edge " + std::to_string(e) + " out of range");
    const int h0 = edge_half_[e][0];
    const int h1 = edge_half_[e][1];
    if (triangle_of(h0) == triangle_of(h1))
        throw Error(ErrorCode::DegenerateFlip,
                    "both sides of edge " + std::to_string(e) + " lie in the same triangle");

    // Quadrilateral a -> d -> b -> c with diagonal e = a-b.
    const int B = next(h0), C = prev(h0), D = next(h1), E = prev(h1);
    const int a = tail_[h0], b = tail_[B], c = tail_[C], d = tail_[E];

    // New layout: t0 = (d, c, a) with sides d->c (e), c->a (old C), a->d (old D);
    //             t1 = (c, d, b) with sides c->d (e), d->b (old E), b->c (old B).
    const std::array<int, 4> from{B, C, D, E};
    const std::array<int, 4> to{prev(h1), next(h0), prev(h0), next(h1)};
    auto newpos = [&](int h) {
        for (int k = 0; k < 4; ++k)
            if (from[k] == h)
                return to[k];
        return h;
    };

    std::array<int, 4> old_opp{}, old_edge{};
    for (int k = 0; k < 4; ++k) {
        old_opp[k] = opp_[from[k]];
        old_edge[k] = edge_[from[k]];
    }
    std::array<std::array<int, 2>, 4> old_halves{};
    for (int k = 0; k < 4; ++k)
        old_halves[k] = edge_half_[old_edge[k]];

    for (int k = 0; k < 4; ++k) {
        const int nh = to[k];
        const int no = newpos(old_opp[k]);
        opp_[nh] = no;
        opp_[no] = nh;
        edge_[nh] = old_edge[k];
    }
    for (int k = 0; k < 4; ++k)
        edge_half_[old_edge[k]] = {newpos(old_halves[k][0]), newpos(old_halves[k][1])};

    tail_[h0] = d;
    tail_[next(h0)] = c;
    tail_[prev(h0)] = a;
    tail_[h1] = c;
    tail_[next(h1)] = d;
    tail_[prev(h1)] = b;
    vertex_corner_[a] = prev(h0);
    vertex_corner_[b] = prev(h1);
    vertex_corner_[c] = next(h0);
    vertex_corner_[d] = h0;
}

void Triangulation::permute_vertices(const std::vector<int>& new_id)
{
    const int n = num_vertices();
    if (static_cast<int>(new_id.size()) != n)
        throw Error(ErrorCode::InvalidInput, "vertex permutation has the wrong size");
    std::vector<int> corner(n, -1);
    for (int v = 0; v < n; ++v) {
        const int w = new_id[v];
        if (w < 0 || w >= n || corner[w] != -1)
            throw Error(ErrorCode::InvalidInput, "vertex relabeling is not a permutation");
        corner[w] = vertex_corner_[v];
    }
    for (int& t : tail_)
        t = new_id[t];
    vertex_corner_ = std::move(corner);
}

void Triangulation::validate() const
{
    const int H = num_halfedges();
    if (H % 3 != 0 || 2 * num_edges() != H)
        throw Error(ErrorCode::InvalidInput, "3|T| != 2|E|");
    for (int h = 0; h < H; ++h) {
        const int o = opp_[h];
        if (o < 0 || o >= H || o == h || opp_[o] != h)
            throw Error(ErrorCode::UnmatchedSide, "opposite-side table is not an involution");
        if (edge_[o] != edge_[h])
            throw Error(ErrorCode::InvalidInput, "edge table inconsistent with gluing");
        if (tail_[o] != head(h) || head(o) != tail_[h])
            throw Error(ErrorCode::NonOrientable, "gluing does not reverse side orientation");
        const auto& hh = edge_half_[edge_[h]];
        if (hh[0] != h && hh[1] != h)
            throw Error(ErrorCode::InvalidInput, "edge-to-side table inconsistent");
    }
    std::vector<int> visits(H, 0);
    int total = 0;
    for (int v = 0; v < num_vertices(); ++v) {
        const int start = vertex_corner_[v];
        int c = start;
        int steps = 0;
        do {
            if (tail_[c] != v || visits[c]++ != 0 || ++steps > H)
                throw Error(ErrorCode::InvalidInput, "vertex corner cycle inconsistent");
            c = next_corner(c);
        } while (c != start);
        total += steps;
    }
    if (total != H)
        throw Error(ErrorCode::InvalidInput, "vertex corner cycles do not cover all corners");
}

Triangulation build_from_faces(int num_vertices, const std::vector<std::array<int, 3>>& faces)
{
    const int nt = static_cast<int>(faces.size());
    std::map<std::pair<int, int>, int> directed; // (tail, head) -> halfedge
    for (int t = 0; t < nt; ++t) {
        for (int i = 0; i < 3; ++i) {
            const int a = faces[t][i], b = faces[t][(i + 1) % 3];
            if (a < 0 || a >= num_vertices || b < 0 || b >= num_vertices)
                throw Error(ErrorCode::InvalidInput, "face references an unknown vertex");
            if (a == b)
                throw Error(ErrorCode::InvalidInput, "face with a repeated vertex");
            if (!directed.emplace(std::make_pair(a, b), 3 * t + i).second)
                throw Error(ErrorCode::NonOrientable,
                            "directed edge " + std::to_string(a) + "->" + std::to_string(b) + " used twice");
        }
    }
    std::vector<Gluing> gluings;
    std::vector<char> done(3 * nt, 0);
    for (int h = 0; h < 3 * nt; ++h) {
        if (done[h])
            continue;
        const int a = faces[h / 3][h % 3], b = faces[h / 3][(h % 3 + 1) % 3];
        const auto it = directed.find({b, a});
        if (it == directed.end())
            throw Error(ErrorCode::OpenMesh, "edge " + std::to_string(a) + "-" + std::to_string(b) + " has one side");
        done[h] = done[it->second] = 1;
        gluings.push_back({{h / 3, h % 3}, {it->second / 3, it->second % 3}, true});
    }
    Triangulation T = Triangulation::build(nt, gluings);
    // Rename orbit ids to the caller's vertex ids.
    if (T.num_vertices() != num_vertices) {
        std::vector<char> used(num_vertices, 0);
        for (const auto& f : faces)
            for (int v : f)
                used[v] = 1;
        for (int v = 0; v < num_vertices; ++v)
            if (!used[v])
                throw Error(ErrorCode::InvalidInput, "vertex " + std::to_string(v) + " is not used by any face");
        throw Error(ErrorCode::OpenMesh, "non-manifold vertex");
    }
    std::vector<int> new_id(num_vertices, -1);
    for (int h = 0; h < 3 * nt; ++h) {
        const int orbit = T.tail(h), given = faces[h / 3][h % 3];
        if (new_id[orbit] == -1)
            new_id[orbit] = given;
        else if (new_id[orbit] != given)
            throw Error(ErrorCode::OpenMesh, "vertex identification mismatch");
    }
    T.permute_vertices(new_id);
    return T;
}

Triangulation flip_edge(const Triangulation& T, int e)
{
    Triangulation out = T;
    out.flip_in_place(e);
    return out;
}

bool isomorphic(const Triangulation& A, const Triangulation& B, bool respect_labels)
{
    if (A.num_triangles() != B.num_triangles() || A.num_edges() != B.num_edges() ||
        A.num_vertices() != B.num_vertices())
        return false;
    const int H = A.num_halfedges();
    std::vector<int> fwd(H), bwd(H);
    for (int s = 0; s < H; ++s) {
        std::fill(fwd.begin(), fwd.end(), -1);
        std::fill(bwd.begin(), bwd.end(), -1);
        std::queue<int> q;
        bool ok = true;
        auto assign = [&](int ha, int hb) {
            if (fwd[ha] == -1 && bwd[hb] == -1) {
                if (respect_labels && (A.edge(ha) != B.edge(hb) || A.tail(ha) != B.tail(hb)))
                    return false;
                fwd[ha] = hb;
                bwd[hb] = ha;
                q.push(ha);
                return true;
            }
            return fwd[ha] == hb && bwd[hb] == ha;
        };
        ok = assign(0, s);
        while (ok && !q.empty()) {
            const int ha = q.front();
            q.pop();
            const int hb = fwd[ha];
            ok = assign(Triangulation::next(ha), Triangulation::next(hb)) && assign(A.opp(ha), B.opp(hb));
        }
        if (ok)
            return true;
    }
    return false;
}

const char* kind_name(SubcomplexKind k)
{
    switch (k) {
    case SubcomplexKind::LinearGraph: return "LinearGraph";
    case SubcomplexKind::DiskTriangulation: return "DiskTriangulation";
    case SubcomplexKind::Other: return "Other";
    }
    return "Other";
}

Subcomplex subcomplex_avoiding(const Triangulation& T, int vinf)
{
    if (vinf < 0 || vinf >= T.num_vertices())
        throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(vinf));
    Subcomplex S;
    S.parent = T;
    S.removed_vertex = vinf;
    S.vertex_kept.assign(T.num_vertices(), 0);
    S.vertex_boundary.assign(T.num_vertices(), 0);
    S.edge_kept.assign(T.num_edges(), 0);
    S.edge_boundary.assign(T.num_edges(), 0);
    S.triangle_kept.assign(T.num_triangles(), 0);
    for (int v = 0; v < T.num_vertices(); ++v) {
        if (v != vinf) {
            S.vertex_kept[v] = 1;
            S.vertices.push_back(v);
        }
    }
    for (int t = 0; t < T.num_triangles(); ++t) {
        if (T.tail(3 * t) != vinf && T.tail(3 * t + 1) != vinf && T.tail(3 * t + 2) != vinf) {
            S.triangle_kept[t] = 1;
            S.triangles.push_back(t);
        }
    }
    for (int e = 0; e < T.num_edges(); ++e) {
        if (T.v1(e) == vinf || T.v2(e) == vinf)
            continue;
        S.edge_kept[e] = 1;
        S.edges.push_back(e);
        const int sides = S.triangle_kept[Triangulation::triangle_of(T.half(e, 0))] +
                          S.triangle_kept[Triangulation::triangle_of(T.half(e, 1))];
        S.edge_boundary[e] = sides < 2;
    }
    for (int v : S.vertices) {
        for (int c : T.corners_at(v)) {
            if (!S.triangle_kept[Triangulation::triangle_of(c)]) {
                S.vertex_boundary[v] = 1;
                break;
            }
        }
    }
    return S;
}

std::pair<int, int> vertex_degrees(const Triangulation& T, const Subcomplex* S, int v)
{
    if (v < 0 || v >= T.num_vertices() || (S && !S->vertex_kept[v]))
        throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(v));
    int deg1 = 0, deg2 = 0;
    for (int c : T.corners_at(v)) {
        // Each corner at v is the start of exactly one side leaving v.
        if (!S || S->edge_kept[T.edge(c)])
            ++deg1;
        if (!S || S->triangle_kept[Triangulation::triangle_of(c)])
            ++deg2;
    }
    return {deg1, deg2};
}

SubcomplexKind classify_subcomplex(const Subcomplex& S)
{
    const Triangulation& T = S.parent;
    const int nv = static_cast<int>(S.vertices.size());
    if (nv == 0)
        return SubcomplexKind::Other;

    if (S.triangles.empty()) {
        if (static_cast<int>(S.edges.size()) != nv - 1)
            return SubcomplexKind::Other;
        std::vector<std::vector<int>> adj(T.num_vertices());
        for (int e : S.edges) {
            if (T.v1(e) == T.v2(e))
                return SubcomplexKind::Other;
            adj[T.v1(e)].push_back(T.v2(e));
            adj[T.v2(e)].push_back(T.v1(e));
        }
        for (int v : S.vertices)
            if (adj[v].size() > 2)
                return SubcomplexKind::Other;
        std::vector<char> seen(T.num_vertices(), 0);
        std::vector<int> stack{S.vertices.front()};
        seen[S.vertices.front()] = 1;
        int count = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++count;
                    stack.push_back(w);
                }
        }
        return count == nv ? SubcomplexKind::LinearGraph : SubcomplexKind::Other;
    }

    // Disk test: every kept cell lies in a kept triangle, each vertex link is a
    // single arc (boundary) or a full cycle (interior), connected, and chi = 1.
    for (int e : S.edges) {
        if (!S.triangle_kept[Triangulation::triangle_of(T.half(e, 0))] &&
            !S.triangle_kept[Triangulation::triangle_of(T.half(e, 1))])
            return SubcomplexKind::Other;
    }
    for (int v : S.vertices) {
        const auto corners = T.corners_at(v);
        int kept = 0, runs_ending = 0;
        const int d = static_cast<int>(corners.size());
        for (int k = 0; k < d; ++k) {
            const bool in = S.triangle_kept[Triangulation::triangle_of(corners[k])];
            const bool next_in = S.triangle_kept[Triangulation::triangle_of(corners[(k + 1) % d])];
            kept += in;
            runs_ending += in && !next_in;
        }
        if (kept == 0)
            return SubcomplexKind::Other;
        if (kept < d && runs_ending != 1)
            return SubcomplexKind::Other;
    }
    std::vector<char> seen(T.num_triangles(), 0);
    std::vector<int> stack{S.triangles.front()};
    seen[S.triangles.front()] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int t = stack.back();
        stack.pop_back();
        for (int i = 0; i < 3; ++i) {
            const int u = Triangulation::triangle_of(T.opp(3 * t + i));
            if (S.triangle_kept[u] && !seen[u]) {
                seen[u] = 1;
                ++count;
                stack.push_back(u);
            }
        }
    }
    if (count != static_cast<int>(S.triangles.size()))
        return SubcomplexKind::Other;
    const int chi = nv - static_cast<int>(S.edges.size()) + static_cast<int>(S.triangles.size());
    return chi == 1 ? SubcomplexKind::DiskTriangulation : SubcomplexKind::Other;
}

} // namespace uniformize
