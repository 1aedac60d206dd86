#pragma once

#include "polycurv/mesh.hpp"

namespace polycurv {
namespace shapes {

/// Unit cube [0,1]^3, 8 vertices / 12 triangles, outward orientation. Every
/// face diagonal passes through corner 0 (0,0,0) or corner 7 (1,1,1), so
/// those two corners have symmetric degree-6 stars.
TriMesh unit_cube();

/// Regular tetrahedron with the given edge length, outward orientation.
TriMesh regular_tetrahedron(double edge = 1.0);

/// Regular icosahedron inscribed in the unit sphere, outward orientation.
TriMesh icosahedron();

/// Icosahedron subdivided `level` times with all vertices projected to the
/// sphere of the given radius. level 0 is the icosahedron itself.
TriMesh icosphere(int level, double radius = 1.0);

/// Torus of revolution: nu segments around the axis, nv around the tube.
TriMesh torus(int nu, int nv, double major_radius = 2.0, double minor_radius = 1.0);

/// Axis-aligned square grid in the z=0 plane over [0,size]^2 with n x n
/// cells, each split into two triangles. Has a boundary.
TriMesh planar_grid(int n, double size = 1.0);

/// Triangulated disk: a fan of `segments` triangles around the origin plus
/// `rings-1` additional concentric vertex rings. rings >= 1.
TriMesh disk(int segments, int rings, double radius = 1.0);

/// A single triangle in the z=0 plane.
TriMesh single_triangle();

/// Closed genus-2 surface: boundary of a 5x3x1 voxel slab with two square
/// holes punched through, outward orientation. chi = -2.
TriMesh genus2();

}  // namespace shapes
}  // namespace polycurv
