#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "polycurv/mesh.hpp"

namespace polycurv {

class RelationError : public std::runtime_error {
public:
    explicit RelationError(const std::string& what) : std::runtime_error(what) {}
};

/// A region of a mesh given by a set of triangles, with its oriented
/// boundary segments and outward conormals derived from the halfedge
/// structure: a boundary segment is a halfedge of a patch triangle whose
/// twin lies outside the patch, and its conormal is the in-plane outward
/// rotation (halfedge vector) x (face normal), normalized.
struct Patch {
    struct Segment {
        HalfedgeId halfedge = -1;
        Vec3 a, b;       // endpoints in halfedge direction
        Vec3 conormal;   // unit, in the incident triangle's plane, outward
        double length = 0.0;
    };
    std::vector<FaceId> faces;
    std::vector<Segment> boundary;
    std::vector<EdgeId> interior_edges;
    double area = 0.0;
    double diameter = 0.0;  // bounding-box diagonal of the patch vertices
};

Patch make_patch(const TriMesh& mesh, std::vector<FaceId> faces);

/// Patch covering the star of a vertex.
Patch star_patch(const TriMesh& mesh, VertexId v);

/// One verified integral relation: both sides, the residual, and the
/// verdict at the tolerance the relation was checked with.
struct RelationReport {
    std::string relation;
    std::vector<double> lhs;  // size 1 (scalar) or 3 (vector)
    std::vector<double> rhs;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Surface-tension balance: boundary conormal integral vs the sum of edge
/// mean-curvature vectors over the patch interior. Exact for polyhedral
/// surfaces; default tolerance 1e-12 * diameter.
RelationReport check_force_balance(const TriMesh& mesh, const Patch& patch, double tol = -1.0);

/// Rotational analog with segment/edge midpoints as the exact first moments;
/// default tolerance 1e-10 * diameter^2.
RelationReport check_torque_balance(const TriMesh& mesh, const Patch& patch, double tol = -1.0);

/// Position relation: boundary integral of x . conormal vs
/// sum m_e . H_e + 2 Area(patch); default tolerance 1e-10 * diameter^2.
/// For a flat or minimal patch this reduces to Area = lhs / 2.
RelationReport check_position_relation(const TriMesh& mesh, const Patch& patch, double tol = -1.0);

/// Vector area: half the boundary integral of x cross dx vs the summed face
/// area vectors; default tolerance 1e-12 * diameter^2.
RelationReport check_vector_area(const TriMesh& mesh, const Patch& patch, double tol = -1.0);

/// Whole-mesh Gauss/Bonnet: total angle defect vs 2 pi chi. Closed meshes
/// only; default tolerance 1e-8 (absolute).
RelationReport check_gauss_bonnet(const TriMesh& mesh, double tol = -1.0);

/// Disk-patch Gauss/Bonnet: interior defects plus boundary turning (angles
/// inside the patch) vs 2 pi. The patch must be a disk (chi == 1);
/// default tolerance 1e-10.
RelationReport check_gauss_bonnet_disk(const TriMesh& mesh, const Patch& patch, double tol = -1.0);

/// Offset-volume polynomial of a convex closed mesh at offset t:
///   Vol + t Area + (t^2/2) sum theta_e |e| + (t^3/3) 4 pi,
/// checked against a Monte-Carlo estimate of the t-neighborhood volume
/// (fraction of box samples within distance t of the solid). Statistical
/// verdict: |poly - mc| <= 4 standard errors.
struct SteinerEvaluation {
    double t = 0.0;
    double volume = 0.0;          // enclosed volume of the mesh
    double area = 0.0;            // surface area
    double edge_term = 0.0;       // sum theta_e |e|
    double poly_volume = 0.0;
    double mc_volume = 0.0;
    double mc_stderr = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    bool pass = false;
};

SteinerEvaluation steiner_polynomial(const TriMesh& mesh, double t, std::uint64_t samples,
                                     std::uint64_t seed);

/// Total enclosed volume by the divergence theorem (closed meshes).
double enclosed_volume(const TriMesh& mesh);

/// Sum of triangle areas.
double total_area(const TriMesh& mesh);

/// True if the closed mesh bounds a convex solid: every vertex lies on or
/// behind every face plane (within eps_rel * bbox diagonal).
bool is_convex(const TriMesh& mesh, double eps_rel = 1e-9);

}  // namespace polycurv
