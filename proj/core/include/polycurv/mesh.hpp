#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polycurv/vec3.hpp"

namespace polycurv {

using VertexId = int;
using EdgeId = int;
using FaceId = int;
using HalfedgeId = int;

/// Raised for malformed input files and for meshes that violate the
/// manifold/orientation/non-degeneracy contract.
class MeshError : public std::runtime_error {
public:
    explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// Oriented manifold triangle mesh, immutable after construction.
///
/// Halfedge h belongs to face h/3 and runs from triangle(h/3)[h%3] to
/// triangle(h/3)[(h%3+1)%3]. Boundary halfedges have twin(h) == -1. Every
/// interior edge is required to appear once in each direction across its two
/// triangles (consistent orientation); an edge with three or more incident
/// triangles is rejected as non-manifold, as is a vertex whose incident
/// triangles do not form a single fan.
///
/// Triangles whose area is below 1e-12 * (bounding box diagonal)^2 are
/// rejected: cotangent weights blow up on them.
class TriMesh {
public:
    TriMesh(std::vector<Vec3> positions, std::vector<std::array<VertexId, 3>> triangles);

    int vertex_count() const { return static_cast<int>(positions_.size()); }
    int face_count() const { return static_cast<int>(triangles_.size()); }
    int edge_count() const { return static_cast<int>(edge_halfedge_.size()); }
    int halfedge_count() const { return 3 * face_count(); }

    const Vec3& position(VertexId v) const { return positions_[v]; }
    std::span<const Vec3> positions() const { return positions_; }
    const std::array<VertexId, 3>& triangle(FaceId f) const { return triangles_[f]; }
    std::span<const std::array<VertexId, 3>> triangles() const { return triangles_; }

    HalfedgeId twin(HalfedgeId h) const { return twin_[h]; }
    static HalfedgeId next(HalfedgeId h) { return 3 * (h / 3) + (h % 3 + 1) % 3; }
    static HalfedgeId prev(HalfedgeId h) { return 3 * (h / 3) + (h % 3 + 2) % 3; }
    static FaceId face(HalfedgeId h) { return h / 3; }
    VertexId from(HalfedgeId h) const { return triangles_[h / 3][h % 3]; }
    VertexId to(HalfedgeId h) const { return triangles_[h / 3][(h % 3 + 1) % 3]; }
    EdgeId edge(HalfedgeId h) const { return halfedge_edge_[h]; }

    /// Canonical halfedge of an edge (the one seen first during construction).
    HalfedgeId halfedge(EdgeId e) const { return edge_halfedge_[e]; }
    std::array<VertexId, 2> edge_vertices(EdgeId e) const {
        HalfedgeId h = edge_halfedge_[e];
        return {from(h), to(h)};
    }
    bool edge_is_boundary(EdgeId e) const { return twin_[edge_halfedge_[e]] < 0; }
    bool vertex_is_boundary(VertexId v) const { return vertex_boundary_[v]; }
    bool vertex_is_isolated(VertexId v) const { return vertex_halfedge_[v] < 0; }

    /// An outgoing halfedge at v. For boundary vertices this is the fan start:
    /// the outgoing halfedge lying on a boundary edge, so that repeatedly
    /// crossing to the counterclockwise neighbor enumerates the whole fan.
    HalfedgeId outgoing_halfedge(VertexId v) const { return vertex_halfedge_[v]; }

    int vertex_degree(VertexId v) const;

    Vec3 halfedge_vector(HalfedgeId h) const { return positions_[to(h)] - positions_[from(h)]; }
    double edge_length(EdgeId e) const { return norm(halfedge_vector(edge_halfedge_[e])); }
    Vec3 face_area_vector(FaceId f) const;  // (unit normal) * area
    Vec3 face_normal(FaceId f) const { return normalized(face_area_vector(f)); }
    double face_area(FaceId f) const { return norm(face_area_vector(f)); }
    Vec3 face_centroid(FaceId f) const;

    /// Interior angle of face f at its corner c (0..2), via atan2.
    double corner_angle(FaceId f, int corner) const;

    std::pair<Vec3, Vec3> bounding_box() const { return {bbox_min_, bbox_max_}; }
    double bbox_diagonal() const { return norm(bbox_max_ - bbox_min_); }

private:
    void build_connectivity();
    void validate_geometry() const;

    std::vector<Vec3> positions_;
    std::vector<std::array<VertexId, 3>> triangles_;
    std::vector<HalfedgeId> twin_;           // per halfedge, -1 on boundary
    std::vector<EdgeId> halfedge_edge_;      // per halfedge
    std::vector<HalfedgeId> edge_halfedge_;  // per edge, canonical
    std::vector<HalfedgeId> vertex_halfedge_;  // per vertex, -1 if isolated
    std::vector<bool> vertex_boundary_;
    Vec3 bbox_min_, bbox_max_;
};

/// V/E/F counts, Euler characteristic (exact integer arithmetic), boundary
/// loop count, and genus for closed meshes.
struct MeshTopology {
    int vertex_count = 0;
    int edge_count = 0;
    int face_count = 0;
    int euler_characteristic = 0;
    int boundary_loop_count = 0;
    bool is_closed = false;
    std::optional<int> genus;  // (2 - chi) / 2, closed orientable meshes only
};

MeshTopology compute_topology(const TriMesh& mesh);

/// The star of a vertex: its neighbors in orientation-consistent cyclic order
/// plus the incident faces. For interior vertices the neighbor cycle is
/// closed (neighbors.front() follows neighbors.back()); boundary stars are
/// open fans anchored at a boundary edge.
struct VertexStar {
    VertexId center = -1;
    std::vector<VertexId> neighbors;
    std::vector<FaceId> faces;
    bool boundary = false;
};

VertexStar vertex_star(const TriMesh& mesh, VertexId v);

/// Splits edge e at parameter t in (0,1) along its canonical halfedge,
/// subdividing both incident triangles. Returns the new mesh and the id of
/// the inserted vertex. Boundary edges are rejected.
std::pair<TriMesh, VertexId> subdivide_edge(const TriMesh& mesh, EdgeId e, double t);

enum class MeshFormat { Off, Obj };

TriMesh load_mesh(const std::string& path, MeshFormat format);
TriMesh load_mesh(const std::string& path);  // format from extension
TriMesh read_off(std::istream& in);
TriMesh read_obj(std::istream& in);
void write_off(const TriMesh& mesh, std::ostream& out);  // 17 significant digits
void save_off(const TriMesh& mesh, const std::string& path);

}  // namespace polycurv
