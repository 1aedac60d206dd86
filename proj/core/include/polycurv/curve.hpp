#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polycurv/vec3.hpp"

namespace polycurv {

class CurveError : public std::runtime_error {
public:
    explicit CurveError(const std::string& what) : std::runtime_error(what) {}
};

/// Polygonal space curve. Closed curves do not repeat the first point at the
/// end; consecutive points must be distinct.
struct PolyCurve {
    std::vector<Vec3> points;
    bool closed = false;

    int point_count() const { return static_cast<int>(points.size()); }
    int edge_count() const { return closed ? point_count() : point_count() - 1; }
    /// Edge i runs from point i to point (i+1) mod n.
    Vec3 edge_vector(int i) const {
        return points[(i + 1) % points.size()] - points[i];
    }
};

/// Per-vertex turning angles psi in [0, pi] and the three total-curvature
/// sums: sum psi, sum 2 sin(psi/2), sum 2 tan(psi/2). For open curves only
/// interior vertices turn; for closed curves every vertex does.
struct TurningData {
    std::vector<int> vertices;  // point index of each turning angle
    std::vector<double> psi;
    double total_turning = 0.0;
    double total_2sin = 0.0;
    double total_2tan = 0.0;  // +inf if any psi equals pi
};

TurningData turning_angles(const PolyCurve& curve);

/// Zero-twist orthonormal frame (T, N1, N2) per edge, propagated by the
/// minimal rotation taking each edge tangent to the next. For closed curves
/// `holonomy` is the signed angle (about the first tangent) from the seed N1
/// to the N1 transported once around the loop.
struct ParallelFrame {
    struct EdgeFrame {
        Vec3 t, n1, n2;
    };
    std::vector<EdgeFrame> frames;
    std::optional<double> holonomy;
};

/// seed_normal is projected orthogonal to the first edge and normalized; it
/// must not be parallel to the first edge. Corners with psi == pi are hard
/// errors: the minimal rotation is undefined there.
ParallelFrame parallel_transport_frame(const PolyCurve& curve, const Vec3& seed_normal);

/// Writhe of a closed curve.
///
/// `angle_mod_2pi` comes from the holonomy of the parallel frame, wrapped to
/// (-pi, pi]. `real_radians` is 2*pi times the classical writhe number,
/// evaluated as the Gauss double integral over non-adjacent segment pairs in
/// closed form; it is only defined for embedded curves and the two values
/// agree mod 2pi.
struct WritheResult {
    double angle_mod_2pi = 0.0;
    std::optional<double> real_radians;
};

/// Computes the mod-2pi writhe; when `want_real` is set also the real-valued
/// refinement, rejecting self-intersecting curves.
WritheResult writhe(const PolyCurve& curve, bool want_real = true);

/// Gauss double integral in closed form (sum of signed spherical quadrilateral
/// areas over non-adjacent segment pairs). Exposed separately so callers can
/// cross-check it against the holonomy route. Throws for open or
/// self-intersecting curves.
double writhe_gauss_radians(const PolyCurve& curve);

/// True if two non-adjacent segments pass within eps of each other.
bool curve_self_intersects(const PolyCurve& curve, double eps_rel = 1e-9);

/// Plain-text format: one `x y z` triple per line; '#' starts a comment.
PolyCurve read_curve(std::istream& in, bool closed);
PolyCurve load_curve(const std::string& path, bool closed);

}  // namespace polycurv
