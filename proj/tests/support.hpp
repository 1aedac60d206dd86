#pragma once

// Shared helpers for the test suites: deterministic random geometry and a
// few independent oracles kept deliberately separate from the library code
// they check.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "polycurv/curve.hpp"
#include "polycurv/mesh.hpp"

namespace testsupport {

using polycurv::TriMesh;
using polycurv::Vec3;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

inline Vec3 random_unit(std::mt19937_64& rng) {
    while (true) {
        Vec3 v{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
        double n = norm(v);
        if (n > 0.1 && n < 1.0) return v / n;
    }
}

/// Vertex positions jittered by `amplitude`; connectivity unchanged.
inline TriMesh perturbed(const TriMesh& mesh, double amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Vec3> pts(mesh.positions().begin(), mesh.positions().end());
    for (Vec3& p : pts)
        p += Vec3{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)} * amplitude;
    return TriMesh(std::move(pts),
                   {mesh.triangles().begin(), mesh.triangles().end()});
}

inline TriMesh translated(const TriMesh& mesh, const Vec3& offset) {
    std::vector<Vec3> pts(mesh.positions().begin(), mesh.positions().end());
    for (Vec3& p : pts) p += offset;
    return TriMesh(std::move(pts), {mesh.triangles().begin(), mesh.triangles().end()});
}

inline TriMesh scaled(const TriMesh& mesh, double factor) {
    std::vector<Vec3> pts(mesh.positions().begin(), mesh.positions().end());
    for (Vec3& p : pts) p *= factor;
    return TriMesh(std::move(pts), {mesh.triangles().begin(), mesh.triangles().end()});
}

/// Random rotation (uniform via quaternion) plus translation.
inline TriMesh rigidly_moved(const TriMesh& mesh, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double u1 = uniform(rng, 0, 1), u2 = uniform(rng, 0, 1), u3 = uniform(rng, 0, 1);
    double a = std::sqrt(1 - u1), b = std::sqrt(u1);
    double q0 = a * std::sin(2 * polycurv::kPi * u2), q1 = a * std::cos(2 * polycurv::kPi * u2);
    double q2 = b * std::sin(2 * polycurv::kPi * u3), q3 = b * std::cos(2 * polycurv::kPi * u3);
    auto rotate = [&](const Vec3& v) {
        // quaternion rotation (q0 scalar part would be q3 here; any unit
        // quaternion works as long as it is applied consistently)
        Vec3 qv{q0, q1, q2};
        Vec3 t = cross(qv, v) * 2.0;
        return v + t * q3 + cross(qv, t);
    };
    Vec3 shift{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)};
    std::vector<Vec3> pts(mesh.positions().begin(), mesh.positions().end());
    for (Vec3& p : pts) p = rotate(p) + shift;
    return TriMesh(std::move(pts), {mesh.triangles().begin(), mesh.triangles().end()});
}

/// Random closed polygon with points uniform in the unit cube; rejects
/// short edges and corners so close to pi that transport is undefined.
inline polycurv::PolyCurve random_closed_polygon(std::mt19937_64& rng, int n) {
    while (true) {
        polycurv::PolyCurve curve;
        curve.closed = true;
        for (int i = 0; i < n; ++i)
            curve.points.push_back({uniform(rng, 0, 1), uniform(rng, 0, 1), uniform(rng, 0, 1)});
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            if (norm(curve.edge_vector(i)) < 1e-3) ok = false;
        for (int i = 0; i < n && ok; ++i) {
            Vec3 u = curve.edge_vector((i + n - 1) % n);
            Vec3 v = curve.edge_vector(i);
            if (polycurv::kPi - polycurv::angle_between(u, v) < 1e-2) ok = false;
        }
        if (ok) return curve;
    }
}

}  // namespace testsupport
