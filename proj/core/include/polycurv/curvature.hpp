#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polycurv/mesh.hpp"

namespace polycurv {

class CurvatureError : public std::runtime_error {
public:
    explicit CurvatureError(const std::string& what) : std::runtime_error(what) {}
};

// Sign conventions, used consistently across modules: closed meshes carry
// outward unit normals; the mean-curvature vector of a convex mesh then
// points inward, the vector area (volume gradient) outward, and
// area_gradient == -vertex_mean_curvature at every interior vertex.

/// Discrete Gauss curvature: 2*pi minus the interior angle sum at an interior
/// vertex (the angle defect). Angles via atan2.
double gauss_curvature(const TriMesh& mesh, VertexId v);

/// Geodesic turning contribution of a boundary vertex: pi minus the interior
/// angle sum. Reported separately from interior curvature so that the
/// with-boundary global angle count closes.
double boundary_turn(const TriMesh& mesh, VertexId v);

/// Connectivity-only curvature (pi/3) * (6 - deg v), the angle defect of the
/// metric in which every triangle is equilateral.
double combinatorial_curvature(const TriMesh& mesh, VertexId v);

/// Positive/negative curvature split at an interior vertex: k_plus is the
/// angle defect of the vertex on the convex hull of its star when the vertex
/// is extreme there, and k_minus = k_plus - K_p >= 0. When the vertex is not
/// extreme on that hull the split is extended as k_plus = 0,
/// k_minus = -K_p, and `extreme` is false so reports can flag the extended
/// convention. Absolute curvature is k_plus + k_minus.
struct BrehmKuehnelSplit {
    double k_plus = 0.0;
    double k_minus = 0.0;
    bool extreme = false;
};

BrehmKuehnelSplit brehm_kuehnel_split(const TriMesh& mesh, VertexId v);

/// Vector area A_p = (1/6) sum of p_i x p_{i+1} over the cyclically ordered
/// star boundary; equals the gradient of enclosed volume with respect to p
/// and one third of the integral of the unit normal over Star(p). Interior
/// vertices only (the link must be closed).
Vec3 vector_area(const TriMesh& mesh, VertexId v);

/// A_p := Area(Star(p)) / 3.
double star_area_third(const TriMesh& mesh, VertexId v);

/// Per-edge mean-curvature data for an interior edge.
///
/// h_vec is the conormal boundary integral over Star(e), which evaluates to
/// (nu_1 - nu_2) x e; it is perpendicular to the edge with
/// |h_vec| = 2 sin(theta/2) |e|. theta is the unsigned exterior dihedral
/// angle in [0, pi); `convexity` carries its sign (+1 convex with respect to
/// the face normals, -1 concave, 0 flat). steiner = theta * |e| is the
/// scalar total mean curvature of the edge, >= |h_vec| with equality only
/// for flat edges.
struct EdgeCurvature {
    EdgeId edge = -1;
    double length = 0.0;
    double theta = 0.0;
    int convexity = 0;
    Vec3 h_vec;
    double steiner = 0.0;
};

EdgeCurvature edge_mean_curvature(const TriMesh& mesh, EdgeId e);

/// Vertex mean-curvature vector H_p with 2 H_p = sum of H_e over incident
/// edges. At boundary vertices only interior edges contribute and the value
/// is incomplete as a force balance; callers can check with
/// mesh.vertex_is_boundary.
Vec3 vertex_mean_curvature(const TriMesh& mesh, VertexId v);

/// Same quantity through the cotangent formula
/// H_p = 1/2 sum (cot a_i + cot b_i)(p_i - p); interior vertices only.
/// The two routes agree to rounding and are cross-checked in the tests.
Vec3 vertex_mean_curvature_cot(const TriMesh& mesh, VertexId v);

/// Cotangent weights of the directed neighbor edges at v. Boundary edges
/// carry a single opposite angle; the missing one is left empty.
struct CotangentWeights {
    VertexId center = -1;
    std::vector<VertexId> neighbors;
    std::vector<double> weight;  // cot(alpha) + cot(beta), or the single cot
    std::vector<std::optional<double>> alpha, beta;
};

CotangentWeights cotangent_weights(const TriMesh& mesh, VertexId v);

/// Two discretizations of the bending energy integral of H^2:
/// hp_form = sum h_p^2 A_p with h_p = |H_p| / |vector area|, and
/// legacy_form = sum |H_p|^2 / A_p, both over interior vertices with
/// A_p = Area(Star)/3. Vertices with vanishing vector area are skipped and
/// counted. Both sums are invariant under uniform scaling.
struct WillmoreEnergies {
    double hp_form = 0.0;
    double legacy_form = 0.0;
    int skipped_vertices = 0;
};

WillmoreEnergies willmore_energies(const TriMesh& mesh);

/// Everything the per-vertex report row needs. Interior-only fields are
/// unset (NaN / empty optional) on boundary vertices.
struct VertexCurvature {
    VertexId vertex = -1;
    bool boundary = false;
    std::optional<double> gauss;           // interior
    std::optional<double> turn;            // boundary
    double combinatorial = 0.0;
    std::optional<BrehmKuehnelSplit> split;  // interior
    std::optional<Vec3> area_vector;         // interior
    Vec3 mean_curvature;                     // partial sum on the boundary
    bool force_balance_complete = true;
    double star_area = 0.0;  // A_p = Area(Star)/3
    std::optional<double> density;  // h_p = |H_p| / |A_vec|, needs |A_vec| > 0
};

VertexCurvature vertex_curvature(const TriMesh& mesh, VertexId v);

}  // namespace polycurv
