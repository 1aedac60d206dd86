#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "polycurv/curve.hpp"
#include "polycurv/mesh.hpp"

namespace polycurv {

class ConnectionError : public std::runtime_error {
public:
    explicit ConnectionError(const std::string& what) : std::runtime_error(what) {}
};

enum class BundleKind { Tangent, Normal, AmbientTrivial };

/// Rank-k vector bundle over the facets of a mesh: an orthonormal fiber
/// basis per facet, stored as ambient 3-vectors.
struct DiscreteBundle {
    BundleKind kind = BundleKind::Tangent;
    int rank = 0;
    std::vector<std::vector<Vec3>> fibers;  // fibers[f] has `rank` entries
};

/// The simple rotation attached to an interior edge: rotation by the
/// exterior dihedral angle about the edge direction, mapping the first
/// face's tangent plane (and normal) onto the second face's. `faces` records
/// which pair it connects, in canonical-halfedge order.
struct RidgeTransport {
    EdgeId edge = -1;
    std::array<FaceId, 2> faces{-1, -1};
    Mat3 rotation;  // maps fiber data of faces[0] to faces[1]
};

/// Levi-Civita data for a surface mesh: per-face tangent/normal fibers with
/// a deterministic basis (first edge direction and its in-plane
/// perpendicular), plus one ridge rotation per interior edge. Boundary edges
/// carry no transport.
struct LeviCivita {
    DiscreteBundle tangent;  // rank 2
    DiscreteBundle normal;   // rank 1
    std::vector<RidgeTransport> transports;       // one per interior edge
    std::vector<int> transport_of_edge;           // edge id -> index, -1 boundary
};

LeviCivita build_levi_civita(const TriMesh& mesh);

/// Holonomy of a loop of facets, restricted to the starting facet's fiber.
struct HolonomyResult {
    int loop_id = -1;      // vertex id for star loops
    Mat3 ambient;          // full 3x3 composition
    double angle = 0.0;    // rotation angle of the 2x2 tangent restriction
    double angle_defect = 0.0;  // real-valued curvature at the loop (2pi - sum)
    double normal_deviation = 0.0;  // |ambient * n0 - n0|, should vanish
    double orthogonality_defect = 0.0;
};

/// Composes the ridge rotations counterclockwise around the star of an
/// interior vertex. The restriction to the starting facet's tangent plane is
/// a rotation whose angle equals the discrete Gauss curvature K_p mod 2 pi;
/// the real-valued curvature is the angle defect itself, reported alongside.
HolonomyResult vertex_holonomy(const TriMesh& mesh, const LeviCivita& lc, VertexId v);
HolonomyResult vertex_holonomy(const TriMesh& mesh, VertexId v);

/// Holonomy of the normal bundle of a closed polygonal curve: the
/// composition of the per-corner minimal rotations, restricted to the normal
/// plane of the first edge. The angle equals the writhe mod 2 pi and matches
/// the parallel-frame closure angle; the tangent line bundle has trivial
/// (orientation-preserving) holonomy, reported in `tangent_coefficient`.
struct CurveHolonomy {
    double angle = 0.0;  // rotation of the normal plane, in (-pi, pi]
    double tangent_coefficient = 1.0;
    Mat3 ambient;
};

CurveHolonomy curve_normal_holonomy(const PolyCurve& curve);

}  // namespace polycurv
