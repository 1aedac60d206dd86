#include "polycurv/connections.hpp"

#include <cmath>

#include "polycurv/curvature.hpp"

namespace polycurv {

LeviCivita build_levi_civita(const TriMesh& mesh) {
    LeviCivita lc;
    lc.tangent.kind = BundleKind::Tangent;
    lc.tangent.rank = 2;
    lc.normal.kind = BundleKind::Normal;
    lc.normal.rank = 1;
    lc.tangent.fibers.resize(mesh.face_count());
    lc.normal.fibers.resize(mesh.face_count());

    for (FaceId f = 0; f < mesh.face_count(); ++f) {
        Vec3 t1 = normalized(mesh.halfedge_vector(3 * f));  // first edge of the face
        Vec3 n = mesh.face_normal(f);
        Vec3 t2 = cross(n, t1);
        lc.tangent.fibers[f] = {t1, t2};
        lc.normal.fibers[f] = {n};
    }

    lc.transport_of_edge.assign(mesh.edge_count(), -1);
    for (EdgeId e = 0; e < mesh.edge_count(); ++e) {
        if (mesh.edge_is_boundary(e)) continue;
        HalfedgeId h = mesh.halfedge(e);
        FaceId f1 = TriMesh::face(h);
        FaceId f2 = TriMesh::face(mesh.twin(h));
        Vec3 axis = normalized(mesh.halfedge_vector(h));
        Vec3 n1 = mesh.face_normal(f1);
        Vec3 n2 = mesh.face_normal(f2);
        // signed dihedral angle about the edge axis, so the rotation carries
        // n1 exactly onto n2 and fixes the edge line
        double angle = std::atan2(dot(cross(n1, n2), axis), dot(n1, n2));
        RidgeTransport rt;
        rt.edge = e;
        rt.faces = {f1, f2};
        rt.rotation = Mat3::axis_angle(axis, angle);
        lc.transport_of_edge[e] = static_cast<int>(lc.transports.size());
        lc.transports.push_back(rt);
    }
    return lc;
}

HolonomyResult vertex_holonomy(const TriMesh& mesh, const LeviCivita& lc, VertexId v) {
    if (mesh.vertex_is_boundary(v))
        throw ConnectionError("vertex holonomy needs an interior vertex");

    VertexStar star = vertex_star(mesh, v);

    // Walk the star counterclockwise; crossing from face(h) over the edge of
    // prev(h) applies that edge's rotation, oriented for the travel direction.
    Mat3 total = Mat3::identity();
    HalfedgeId h = mesh.outgoing_halfedge(v);
    HalfedgeId start = h;
    do {
        HalfedgeId into = TriMesh::prev(h);
        EdgeId e = mesh.edge(into);
        const RidgeTransport& rt = lc.transports[lc.transport_of_edge[e]];
        FaceId here = TriMesh::face(h);
        Mat3 step = (rt.faces[0] == here) ? rt.rotation : rt.rotation.transposed();
        total = step * total;
        h = mesh.twin(into);
    } while (h != start);

    FaceId f0 = TriMesh::face(start);
    const Vec3& t1 = lc.tangent.fibers[f0][0];
    const Vec3& t2 = lc.tangent.fibers[f0][1];
    Vec3 image1 = total * t1;

    HolonomyResult res;
    res.loop_id = v;
    res.ambient = total;
    res.angle = std::atan2(dot(image1, t2), dot(image1, t1));
    res.angle_defect = gauss_curvature(mesh, v);
    Vec3 n0 = lc.normal.fibers[f0][0];
    res.normal_deviation = norm(total * n0 - n0);
    res.orthogonality_defect = total.orthogonality_defect();
    return res;
}

HolonomyResult vertex_holonomy(const TriMesh& mesh, VertexId v) {
    return vertex_holonomy(mesh, build_levi_civita(mesh), v);
}

CurveHolonomy curve_normal_holonomy(const PolyCurve& curve) {
    if (!curve.closed) throw ConnectionError("curve holonomy needs a closed curve");
    int m = curve.edge_count();

    // corners in loop order starting and ending at edge 0, so the composed
    // map takes edge 0's fibers to themselves; each ridge (vertex)
    // contributes the minimal rotation taking the incoming tangent to the
    // outgoing one
    Mat3 total = Mat3::identity();
    Vec3 t_prev = normalized(curve.edge_vector(0));
    for (int i = 1; i <= m; ++i) {
        Vec3 t_next = normalized(curve.edge_vector(i % m));
        double psi = angle_between(t_prev, t_next);
        if (kPi - psi < 1e-12)
            throw ConnectionError("antiparallel edges at point " + std::to_string(i % m));
        if (psi >= 1e-15) {
            Vec3 axis = normalized(cross(t_prev, t_next));
            total = Mat3::axis_angle(axis, psi) * total;
        }
        t_prev = t_next;
    }

    Vec3 t0 = normalized(curve.edge_vector(0));
    Vec3 n1 = std::abs(t0.x) <= std::abs(t0.y) && std::abs(t0.x) <= std::abs(t0.z)
                  ? Vec3{1, 0, 0}
                  : (std::abs(t0.y) <= std::abs(t0.z) ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    n1 = normalized(n1 - t0 * dot(n1, t0));
    Vec3 n2 = cross(t0, n1);

    CurveHolonomy res;
    res.ambient = total;
    Vec3 image = total * n1;
    res.angle = std::atan2(dot(image, n2), dot(image, n1));
    res.tangent_coefficient = dot(total * t0, t0);
    return res;
}

}  // namespace polycurv
