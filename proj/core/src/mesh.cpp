#include "polycurv/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <unordered_map>

namespace polycurv {

namespace {

// Degenerate-triangle threshold: area < 1e-12 * (bbox diagonal)^2.
constexpr double kDegenerateAreaFactor = 1e-12;

uint64_t directed_key(VertexId a, VertexId b) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
           static_cast<uint32_t>(b);
}

}  // namespace

TriMesh::TriMesh(std::vector<Vec3> positions, std::vector<std::array<VertexId, 3>> triangles)
    : positions_(std::move(positions)), triangles_(std::move(triangles)) {
    if (positions_.empty()) throw MeshError("mesh has no vertices");

    bbox_min_ = bbox_max_ = positions_[0];
    for (const Vec3& p : positions_) {
        bbox_min_ = {std::min(bbox_min_.x, p.x), std::min(bbox_min_.y, p.y), std::min(bbox_min_.z, p.z)};
        bbox_max_ = {std::max(bbox_max_.x, p.x), std::max(bbox_max_.y, p.y), std::max(bbox_max_.z, p.z)};
    }

    const int nv = vertex_count();
    for (std::size_t f = 0; f < triangles_.size(); ++f) {
        const auto& t = triangles_[f];
        for (int k = 0; k < 3; ++k) {
            if (t[k] < 0 || t[k] >= nv)
                throw MeshError("triangle " + std::to_string(f) + " references vertex " +
                                std::to_string(t[k]) + " out of range");
        }
        if (t[0] == t[1] || t[1] == t[2] || t[2] == t[0])
            throw MeshError("triangle " + std::to_string(f) + " repeats a vertex index");
    }

    validate_geometry();
    build_connectivity();
}

void TriMesh::validate_geometry() const {
    double diag = bbox_diagonal();
    double min_area = kDegenerateAreaFactor * diag * diag;
    for (int f = 0; f < face_count(); ++f) {
        const auto& t = triangles_[f];
        Vec3 a = positions_[t[0]], b = positions_[t[1]], c = positions_[t[2]];
        double area = 0.5 * norm(cross(b - a, c - a));
        if (!(area > min_area))
            throw MeshError("triangle " + std::to_string(f) + " is degenerate (area " +
                            std::to_string(area) + ")");
    }
}

void TriMesh::build_connectivity() {
    const int nh = halfedge_count();
    twin_.assign(nh, -1);
    halfedge_edge_.assign(nh, -1);
    edge_halfedge_.clear();
    vertex_halfedge_.assign(vertex_count(), -1);
    vertex_boundary_.assign(vertex_count(), false);

    std::unordered_map<uint64_t, HalfedgeId> directed;
    directed.reserve(nh);
    for (HalfedgeId h = 0; h < nh; ++h) {
        VertexId a = from(h), b = to(h);
        auto [it, inserted] = directed.emplace(directed_key(a, b), h);
        if (!inserted)
            throw MeshError("halfedge " + std::to_string(a) + "->" + std::to_string(b) +
                            " appears twice: inconsistent orientation or duplicate triangle");
    }
    for (HalfedgeId h = 0; h < nh; ++h) {
        auto it = directed.find(directed_key(to(h), from(h)));
        twin_[h] = (it == directed.end()) ? -1 : it->second;
    }

    // The directed map catches same-direction duplicates; a >=3 triangle edge
    // would need the same direction twice, so the check above already covers
    // the non-manifold ridge condition for oriented input. An unoriented pair
    // of triangles on one edge shows up as a duplicate directed halfedge too.
    // What remains is the vertex fan condition below.

    for (HalfedgeId h = 0; h < nh; ++h) {
        if (halfedge_edge_[h] >= 0) continue;
        EdgeId e = static_cast<EdgeId>(edge_halfedge_.size());
        edge_halfedge_.push_back(h);
        halfedge_edge_[h] = e;
        if (twin_[h] >= 0) halfedge_edge_[twin_[h]] = e;
    }

    // Pick an outgoing halfedge per vertex; prefer the one on a boundary edge
    // so boundary fans start at a boundary edge and proceed by orientation.
    std::vector<int> incident_faces(vertex_count(), 0);
    std::vector<int> boundary_outgoing(vertex_count(), 0);
    for (HalfedgeId h = 0; h < nh; ++h) {
        VertexId v = from(h);
        incident_faces[v] += 1;
        if (vertex_halfedge_[v] < 0) vertex_halfedge_[v] = h;
        if (twin_[h] < 0) {
            vertex_halfedge_[v] = h;
            vertex_boundary_[v] = true;
            boundary_outgoing[v] += 1;
            vertex_boundary_[to(h)] = true;
        }
    }

    // Fan check: starting from vertex_halfedge_, counterclockwise rotation
    // must reach every incident face. A vertex with two boundary gaps or a
    // pinched figure-eight star fails here.
    for (VertexId v = 0; v < vertex_count(); ++v) {
        if (vertex_halfedge_[v] < 0) continue;  // isolated vertices allowed
        if (boundary_outgoing[v] > 1)
            throw MeshError("vertex " + std::to_string(v) + " is non-manifold (multiple boundary fans)");
        int reached = 0;
        HalfedgeId h = vertex_halfedge_[v];
        HalfedgeId start = h;
        do {
            ++reached;
            HalfedgeId into = prev(h);  // halfedge into v in the same face
            h = twin_[into];
        } while (h >= 0 && h != start && reached <= incident_faces[v]);
        if (reached != incident_faces[v])
            throw MeshError("vertex " + std::to_string(v) + " is non-manifold (star is not a single fan)");
    }
}

int TriMesh::vertex_degree(VertexId v) const {
    VertexStar s = vertex_star(*this, v);
    return static_cast<int>(s.neighbors.size());
}

Vec3 TriMesh::face_area_vector(FaceId f) const {
    const auto& t = triangles_[f];
    Vec3 a = positions_[t[0]], b = positions_[t[1]], c = positions_[t[2]];
    return cross(b - a, c - a) * 0.5;
}

Vec3 TriMesh::face_centroid(FaceId f) const {
    const auto& t = triangles_[f];
    return (positions_[t[0]] + positions_[t[1]] + positions_[t[2]]) / 3.0;
}

double TriMesh::corner_angle(FaceId f, int corner) const {
    const auto& t = triangles_[f];
    Vec3 p = positions_[t[corner]];
    Vec3 u = positions_[t[(corner + 1) % 3]] - p;
    Vec3 v = positions_[t[(corner + 2) % 3]] - p;
    return angle_between(u, v);
}

MeshTopology compute_topology(const TriMesh& mesh) {
    MeshTopology topo;
    topo.vertex_count = mesh.vertex_count();
    topo.edge_count = mesh.edge_count();
    topo.face_count = mesh.face_count();
    topo.euler_characteristic = topo.vertex_count - topo.edge_count + topo.face_count;

    // Count boundary loops by walking boundary halfedges.
    std::vector<bool> seen(mesh.halfedge_count(), false);
    int loops = 0;
    for (HalfedgeId h = 0; h < mesh.halfedge_count(); ++h) {
        if (mesh.twin(h) >= 0 || seen[h]) continue;
        ++loops;
        HalfedgeId cur = h;
        do {
            seen[cur] = true;
            HalfedgeId g = TriMesh::next(cur);
            while (mesh.twin(g) >= 0) g = TriMesh::next(mesh.twin(g));
            cur = g;
        } while (cur != h);
    }
    topo.boundary_loop_count = loops;
    topo.is_closed = (loops == 0);
    if (topo.is_closed && (2 - topo.euler_characteristic) % 2 == 0)
        topo.genus = (2 - topo.euler_characteristic) / 2;
    return topo;
}

VertexStar vertex_star(const TriMesh& mesh, VertexId v) {
    if (v < 0 || v >= mesh.vertex_count()) throw MeshError("vertex id out of range");
    if (mesh.vertex_is_isolated(v)) throw MeshError("vertex " + std::to_string(v) + " is isolated");

    VertexStar star;
    star.center = v;
    star.boundary = mesh.vertex_is_boundary(v);

    HalfedgeId h = mesh.outgoing_halfedge(v);
    HalfedgeId start = h;
    while (true) {
        star.neighbors.push_back(mesh.to(h));
        star.faces.push_back(TriMesh::face(h));
        HalfedgeId into = TriMesh::prev(h);
        HalfedgeId nxt = mesh.twin(into);
        if (nxt < 0) {
            // open fan: close with the last ring vertex
            star.neighbors.push_back(mesh.from(into));
            break;
        }
        if (nxt == start) break;
        h = nxt;
    }
    return star;
}

std::pair<TriMesh, VertexId> subdivide_edge(const TriMesh& mesh, EdgeId e, double t) {
    if (e < 0 || e >= mesh.edge_count()) throw MeshError("edge id out of range");
    if (!(t > 0.0 && t < 1.0)) throw MeshError("subdivision parameter must lie in (0,1)");
    if (mesh.edge_is_boundary(e)) throw MeshError("cannot subdivide a boundary edge");

    HalfedgeId h = mesh.halfedge(e);
    HalfedgeId ht = mesh.twin(h);
    VertexId a = mesh.from(h), b = mesh.to(h);
    VertexId c = mesh.to(TriMesh::next(h));        // apex of face(h)
    VertexId d = mesh.to(TriMesh::next(ht));       // apex of face(twin)
    FaceId f1 = TriMesh::face(h), f2 = TriMesh::face(ht);

    std::vector<Vec3> positions(mesh.positions().begin(), mesh.positions().end());
    std::vector<std::array<VertexId, 3>> tris(mesh.triangles().begin(), mesh.triangles().end());

    VertexId q = static_cast<VertexId>(positions.size());
    positions.push_back(mesh.position(a) + (mesh.position(b) - mesh.position(a)) * t);

    tris[f1] = {a, q, c};
    tris[f2] = {q, a, d};
    tris.push_back({q, b, c});
    tris.push_back({b, q, d});

    return {TriMesh(std::move(positions), std::move(tris)), q};
}

}  // namespace polycurv
