#include "polycurv/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace polycurv {

namespace {

double angle_sum(const TriMesh& mesh, VertexId v) {
    VertexStar star = vertex_star(mesh, v);
    double sum = 0.0;
    for (FaceId f : star.faces) {
        const auto& t = mesh.triangle(f);
        for (int k = 0; k < 3; ++k)
            if (t[k] == v) sum += mesh.corner_angle(f, k);
    }
    return sum;
}

double guarded_cot(const Vec3& u, const Vec3& v) {
    Vec3 c = cross(u, v);
    double cn = norm(c);
    if (cn < 1e-14 * norm(u) * norm(v))
        throw CurvatureError("degenerate corner: cotangent guard tripped");
    return dot(u, v) / cn;
}

}  // namespace

double gauss_curvature(const TriMesh& mesh, VertexId v) {
    if (mesh.vertex_is_boundary(v))
        throw CurvatureError("gauss_curvature needs an interior vertex; use boundary_turn");
    return 2.0 * kPi - angle_sum(mesh, v);
}

double boundary_turn(const TriMesh& mesh, VertexId v) {
    if (!mesh.vertex_is_boundary(v))
        throw CurvatureError("boundary_turn called on an interior vertex");
    return kPi - angle_sum(mesh, v);
}

double combinatorial_curvature(const TriMesh& mesh, VertexId v) {
    return (kPi / 3.0) * (6 - mesh.vertex_degree(v));
}

Vec3 vector_area(const TriMesh& mesh, VertexId v) {
    if (mesh.vertex_is_boundary(v))
        throw CurvatureError("vector_area needs an interior vertex (closed link)");
    VertexStar star = vertex_star(mesh, v);
    const auto& ring = star.neighbors;
    Vec3 sum{};
    for (std::size_t i = 0; i < ring.size(); ++i)
        sum += cross(mesh.position(ring[i]), mesh.position(ring[(i + 1) % ring.size()]));
    return sum / 6.0;
}

double star_area_third(const TriMesh& mesh, VertexId v) {
    VertexStar star = vertex_star(mesh, v);
    double area = 0.0;
    for (FaceId f : star.faces) area += mesh.face_area(f);
    return area / 3.0;
}

EdgeCurvature edge_mean_curvature(const TriMesh& mesh, EdgeId e) {
    if (mesh.edge_is_boundary(e))
        throw CurvatureError("edge " + std::to_string(e) + " is a boundary edge");
    HalfedgeId h = mesh.halfedge(e);
    HalfedgeId ht = mesh.twin(h);
    Vec3 ev = mesh.halfedge_vector(h);
    Vec3 n1 = mesh.face_normal(TriMesh::face(h));
    Vec3 n2 = mesh.face_normal(TriMesh::face(ht));

    EdgeCurvature ec;
    ec.edge = e;
    ec.length = norm(ev);
    ec.theta = angle_between(n1, n2);
    double orient = dot(cross(n1, n2), ev);
    double flat_tol = 1e-14 * ec.length;
    ec.convexity = (orient > flat_tol) ? 1 : (orient < -flat_tol ? -1 : 0);
    ec.h_vec = cross(n1 - n2, ev);
    ec.steiner = ec.theta * ec.length;
    return ec;
}

Vec3 vertex_mean_curvature(const TriMesh& mesh, VertexId v) {
    VertexStar star = vertex_star(mesh, v);
    Vec3 sum{};
    // Sum H_e over the interior edges at v by walking outgoing halfedges.
    HalfedgeId h = mesh.outgoing_halfedge(v);
    HalfedgeId start = h;
    while (true) {
        if (mesh.twin(h) >= 0) sum += edge_mean_curvature(mesh, mesh.edge(h)).h_vec;
        HalfedgeId into = TriMesh::prev(h);
        HalfedgeId nxt = mesh.twin(into);
        if (nxt < 0) break;  // open fan: the final edge (into) is boundary
        if (nxt == start) break;
        h = nxt;
    }
    return sum * 0.5;
}

CotangentWeights cotangent_weights(const TriMesh& mesh, VertexId v) {
    VertexStar star = vertex_star(mesh, v);
    CotangentWeights w;
    w.center = v;
    w.neighbors = star.neighbors;
    w.weight.assign(star.neighbors.size(), 0.0);
    w.alpha.resize(star.neighbors.size());
    w.beta.resize(star.neighbors.size());

    auto slot = [&](VertexId u) {
        for (std::size_t i = 0; i < w.neighbors.size(); ++i)
            if (w.neighbors[i] == u) return i;
        throw CurvatureError("neighbor lookup failed");
    };

    const Vec3 p = mesh.position(v);
    for (FaceId f : star.faces) {
        const auto& t = mesh.triangle(f);
        int kv = 0;
        while (t[kv] != v) ++kv;
        VertexId a = t[(kv + 1) % 3];  // ring neighbors of this face
        VertexId b = t[(kv + 2) % 3];
        Vec3 pa = mesh.position(a), pb = mesh.position(b);
        // angle at a is opposite edge v-b; angle at b opposite edge v-a
        double cot_a = guarded_cot(p - pa, pb - pa);
        double cot_b = guarded_cot(p - pb, pa - pb);
        std::size_t ib = slot(b), ia = slot(a);
        w.weight[ib] += cot_a;
        w.weight[ia] += cot_b;
        double ang_a = angle_between(p - pa, pb - pa);
        double ang_b = angle_between(p - pb, pa - pb);
        // orientation: walking the fan, the face (v,a,b) sits before b and
        // after a, so it holds alpha(edge v-b) and beta(edge v-a)
        if (!w.alpha[ib]) w.alpha[ib] = ang_a; else w.beta[ib] = ang_a;
        if (!w.beta[ia]) w.beta[ia] = ang_b; else w.alpha[ia] = ang_b;
    }
    return w;
}

Vec3 vertex_mean_curvature_cot(const TriMesh& mesh, VertexId v) {
    if (mesh.vertex_is_boundary(v))
        throw CurvatureError("cotangent mean curvature needs an interior vertex");
    CotangentWeights w = cotangent_weights(mesh, v);
    const Vec3 p = mesh.position(v);
    Vec3 sum{};
    for (std::size_t i = 0; i < w.neighbors.size(); ++i)
        sum += (mesh.position(w.neighbors[i]) - p) * w.weight[i];
    return sum * 0.5;
}

namespace {

// Tangent-cone route for the hull split: the vertex is extreme on the hull
// of its star iff some direction w has positive dot with every neighbor
// offset. The hull's angle at the vertex is then the cone angle of the
// extreme rays, read off a 2D hull of the projections onto the plane w.x=1.
struct ConeAtVertex {
    bool extreme = false;
    double cone_angle = 0.0;
};

ConeAtVertex hull_cone(const std::vector<Vec3>& dirs) {
    const std::size_t n = dirs.size();
    std::vector<Vec3> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = normalized(dirs[i]);

    // Witness direction: sum of admissible polar-cone extreme ray candidates.
    Vec3 w{};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            Vec3 c = cross(d[i], d[j]);
            double cn = norm(c);
            if (cn < 1e-12) continue;
            c = c / cn;
            bool ok = true;
            for (std::size_t k = 0; k < n; ++k)
                if (dot(c, d[k]) < -1e-12) { ok = false; break; }
            if (ok) w += c;
        }
    // A strictly pointed cone with interior also admits the mean direction.
    Vec3 mean{};
    for (const Vec3& di : d) mean += di;
    for (Vec3 cand : {w, mean}) {
        if (norm(cand) < 1e-14) continue;
        cand = normalized(cand);
        bool strict = true;
        double lo = 1.0;
        for (const Vec3& di : d) {
            double s = dot(cand, di);
            lo = std::min(lo, s);
            if (s < 1e-10) { strict = false; break; }
        }
        if (!strict) continue;

        // Project onto the plane cand.x = 1 and take the 2D convex hull.
        Vec3 u = std::abs(cand.x) < 0.9 ? cross(cand, Vec3{1, 0, 0}) : cross(cand, Vec3{0, 1, 0});
        u = normalized(u);
        Vec3 vv = cross(cand, u);
        std::vector<std::pair<double, double>> pts(n);
        std::vector<int> order(n);
        for (std::size_t i = 0; i < n; ++i) {
            Vec3 x = d[i] / dot(cand, d[i]);
            pts[i] = {dot(x, u), dot(x, vv)};
            order[i] = static_cast<int>(i);
        }
        std::sort(order.begin(), order.end(), [&](int a, int b) { return pts[a] < pts[b]; });

        auto turn = [&](int a, int b, int c) {
            return (pts[b].first - pts[a].first) * (pts[c].second - pts[a].second) -
                   (pts[b].second - pts[a].second) * (pts[c].first - pts[a].first);
        };
        std::vector<int> hull;
        for (int pass = 0; pass < 2; ++pass) {
            std::size_t base = hull.size();
            for (int idx : order) {
                while (hull.size() >= base + 2 &&
                       turn(hull[hull.size() - 2], hull[hull.size() - 1], idx) <= 0)
                    hull.pop_back();
                hull.push_back(idx);
            }
            hull.pop_back();
            std::reverse(order.begin(), order.end());
        }

        ConeAtVertex cone;
        cone.extreme = true;
        for (std::size_t i = 0; i < hull.size(); ++i)
            cone.cone_angle += angle_between(d[hull[i]], d[hull[(i + 1) % hull.size()]]);
        if (hull.size() < 3) cone.cone_angle = hull.size() == 2
            ? 2.0 * angle_between(d[hull[0]], d[hull[1]]) : 0.0;
        return cone;
    }
    return {};
}

}  // namespace

BrehmKuehnelSplit brehm_kuehnel_split(const TriMesh& mesh, VertexId v) {
    if (mesh.vertex_is_boundary(v))
        throw CurvatureError("brehm_kuehnel_split needs an interior vertex");
    double kp = gauss_curvature(mesh, v);
    VertexStar star = vertex_star(mesh, v);
    std::vector<Vec3> dirs;
    dirs.reserve(star.neighbors.size());
    for (VertexId u : star.neighbors) dirs.push_back(mesh.position(u) - mesh.position(v));

    BrehmKuehnelSplit split;
    ConeAtVertex cone = hull_cone(dirs);
    if (cone.extreme) {
        split.extreme = true;
        split.k_plus = 2.0 * kPi - cone.cone_angle;
        split.k_minus = split.k_plus - kp;
    } else {
        // extended convention for non-extreme vertices
        split.extreme = false;
        split.k_plus = 0.0;
        split.k_minus = -kp;
    }
    return split;
}

WillmoreEnergies willmore_energies(const TriMesh& mesh) {
    WillmoreEnergies energies;
    for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
        if (mesh.vertex_is_isolated(v) || mesh.vertex_is_boundary(v)) continue;
        Vec3 h = vertex_mean_curvature(mesh, v);
        Vec3 a = vector_area(mesh, v);
        double a_scalar = star_area_third(mesh, v);
        double an = norm(a);
        if (an == 0.0) {
            ++energies.skipped_vertices;
            continue;
        }
        double hp = norm(h) / an;
        energies.hp_form += hp * hp * a_scalar;
        energies.legacy_form += norm2(h) / a_scalar;
    }
    return energies;
}

VertexCurvature vertex_curvature(const TriMesh& mesh, VertexId v) {
    VertexCurvature row;
    row.vertex = v;
    row.boundary = mesh.vertex_is_boundary(v);
    row.combinatorial = combinatorial_curvature(mesh, v);
    row.star_area = star_area_third(mesh, v);
    row.mean_curvature = vertex_mean_curvature(mesh, v);
    row.force_balance_complete = !row.boundary;
    if (row.boundary) {
        row.turn = boundary_turn(mesh, v);
    } else {
        row.gauss = gauss_curvature(mesh, v);
        row.split = brehm_kuehnel_split(mesh, v);
        Vec3 a = vector_area(mesh, v);
        row.area_vector = a;
        double an = norm(a);
        if (an > 0.0) row.density = norm(row.mean_curvature) / an;
    }
    return row;
}

}  // namespace polycurv
