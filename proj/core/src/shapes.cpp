#include "polycurv/shapes.hpp"

#include <cmath>
#include <map>
#include <set>

namespace polycurv {
namespace shapes {

namespace {
using Tri = std::array<VertexId, 3>;
}

TriMesh unit_cube() {
    // Corner i has coordinates (i&1, (i>>1)&1, (i>>2)&1).
    std::vector<Vec3> pts;
    for (int i = 0; i < 8; ++i)
        pts.push_back({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
    // Each face split by the diagonal through corner 0 or corner 7,
    // oriented outward.
    std::vector<Tri> tris = {
        {0, 6, 2}, {0, 4, 6},  // x = 0, normal -x
        {1, 3, 7}, {1, 7, 5},  // x = 1, normal +x
        {0, 1, 5}, {0, 5, 4},  // y = 0, normal -y
        {2, 7, 3}, {2, 6, 7},  // y = 1, normal +y
        {0, 3, 1}, {0, 2, 3},  // z = 0, normal -z
        {4, 5, 7}, {4, 7, 6},  // z = 1, normal +z
    };
    return TriMesh(std::move(pts), std::move(tris));
}

TriMesh regular_tetrahedron(double edge) {
    double s = edge / (2.0 * std::sqrt(2.0));
    std::vector<Vec3> pts = {
        Vec3{1, 1, 1} * s, Vec3{1, -1, -1} * s, Vec3{-1, 1, -1} * s, Vec3{-1, -1, 1} * s};
    std::vector<Tri> tris = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
    return TriMesh(std::move(pts), std::move(tris));
}

TriMesh icosahedron() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> pts = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
    for (Vec3& p : pts) p = normalized(p);
    std::vector<Tri> tris = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
        {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
        {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
    return TriMesh(std::move(pts), std::move(tris));
}

TriMesh icosphere(int level, double radius) {
    TriMesh ico = icosahedron();
    std::vector<Vec3> pts(ico.positions().begin(), ico.positions().end());
    std::vector<Tri> tris(ico.triangles().begin(), ico.triangles().end());

    for (int l = 0; l < level; ++l) {
        std::map<std::pair<VertexId, VertexId>, VertexId> midpoint;
        auto mid = [&](VertexId a, VertexId b) -> VertexId {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            VertexId m = static_cast<VertexId>(pts.size());
            pts.push_back(normalized((pts[a] + pts[b]) * 0.5));
            midpoint.emplace(key, m);
            return m;
        };
        std::vector<Tri> out;
        out.reserve(4 * tris.size());
        for (const Tri& t : tris) {
            VertexId ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
            out.push_back({t[0], ab, ca});
            out.push_back({t[1], bc, ab});
            out.push_back({t[2], ca, bc});
            out.push_back({ab, bc, ca});
        }
        tris = std::move(out);
    }
    for (Vec3& p : pts) p = normalized(p) * radius;
    return TriMesh(std::move(pts), std::move(tris));
}

TriMesh torus(int nu, int nv, double major_radius, double minor_radius) {
    std::vector<Vec3> pts;
    pts.reserve(static_cast<std::size_t>(nu) * nv);
    for (int i = 0; i < nu; ++i) {
        double u = 2.0 * kPi * i / nu;
        for (int j = 0; j < nv; ++j) {
            double v = 2.0 * kPi * j / nv;
            double r = major_radius + minor_radius * std::cos(v);
            pts.push_back({r * std::cos(u), r * std::sin(u), minor_radius * std::sin(v)});
        }
    }
    auto id = [&](int i, int j) { return ((i % nu + nu) % nu) * nv + ((j % nv + nv) % nv); };
    std::vector<Tri> tris;
    tris.reserve(static_cast<std::size_t>(2) * nu * nv);
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return TriMesh(std::move(pts), std::move(tris));
}

TriMesh planar_grid(int n, double size) {
    std::vector<Vec3> pts;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            pts.push_back({size * i / n, size * j / n, 0.0});
    auto id = [&](int i, int j) { return j * (n + 1) + i; };
    std::vector<Tri> tris;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return TriMesh(std::move(pts), std::move(tris));
}

TriMesh disk(int segments, int rings, double radius) {
    std::vector<Vec3> pts = {{0, 0, 0}};
    for (int r = 1; r <= rings; ++r) {
        double rho = radius * r / rings;
        for (int s = 0; s < segments; ++s) {
            double a = 2.0 * kPi * s / segments;
            pts.push_back({rho * std::cos(a), rho * std::sin(a), 0.0});
        }
    }
    auto id = [&](int r, int s) { return r == 0 ? 0 : 1 + (r - 1) * segments + (s % segments); };
    std::vector<Tri> tris;
    for (int s = 0; s < segments; ++s)
        tris.push_back({0, id(1, s), id(1, s + 1)});
    for (int r = 1; r < rings; ++r)
        for (int s = 0; s < segments; ++s) {
            tris.push_back({id(r, s), id(r + 1, s), id(r + 1, s + 1)});
            tris.push_back({id(r, s), id(r + 1, s + 1), id(r, s + 1)});
        }
    return TriMesh(std::move(pts), std::move(tris));
}

TriMesh single_triangle() {
    return TriMesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
}

TriMesh genus2() {
    // Solid: 5x3 footprint of unit voxels, one layer thick, with the cells
    // (1,1) and (3,1) removed. The boundary surface of that solid is a
    // closed orientable genus-2 mesh.
    const int NX = 5, NY = 3, NZ = 1;
    auto solid = [&](int x, int y, int z) {
        if (x < 0 || y < 0 || z < 0 || x >= NX || y >= NY || z >= NZ) return false;
        if (z == 0 && y == 1 && (x == 1 || x == 3)) return false;
        return true;
    };

    std::map<std::array<int, 3>, VertexId> vid;
    std::vector<Vec3> pts;
    auto corner = [&](int x, int y, int z) -> VertexId {
        auto it = vid.find({x, y, z});
        if (it != vid.end()) return it->second;
        VertexId v = static_cast<VertexId>(pts.size());
        pts.push_back({double(x), double(y), double(z)});
        vid.emplace(std::array<int, 3>{x, y, z}, v);
        return v;
    };

    std::vector<Tri> tris;
    // Emit the quad (a,b,c,d) counterclockwise as seen from outside.
    auto quad = [&](VertexId a, VertexId b, VertexId c, VertexId d) {
        tris.push_back({a, b, c});
        tris.push_back({a, c, d});
    };

    for (int x = 0; x < NX; ++x)
        for (int y = 0; y < NY; ++y)
            for (int z = 0; z < NZ; ++z) {
                if (!solid(x, y, z)) continue;
                if (!solid(x - 1, y, z))  // -x face
                    quad(corner(x, y, z), corner(x, y, z + 1), corner(x, y + 1, z + 1), corner(x, y + 1, z));
                if (!solid(x + 1, y, z))  // +x face
                    quad(corner(x + 1, y, z), corner(x + 1, y + 1, z), corner(x + 1, y + 1, z + 1), corner(x + 1, y, z + 1));
                if (!solid(x, y - 1, z))  // -y face
                    quad(corner(x, y, z), corner(x + 1, y, z), corner(x + 1, y, z + 1), corner(x, y, z + 1));
                if (!solid(x, y + 1, z))  // +y face
                    quad(corner(x, y + 1, z), corner(x, y + 1, z + 1), corner(x + 1, y + 1, z + 1), corner(x + 1, y + 1, z));
                if (!solid(x, y, z - 1))  // -z face
                    quad(corner(x, y, z), corner(x, y + 1, z), corner(x + 1, y + 1, z), corner(x + 1, y, z));
                if (!solid(x, y, z + 1))  // +z face
                    quad(corner(x, y, z + 1), corner(x + 1, y, z + 1), corner(x + 1, y + 1, z + 1), corner(x, y + 1, z + 1));
            }
    return TriMesh(std::move(pts), std::move(tris));
}

}  // namespace shapes
}  // namespace polycurv
