#include <cmath>
#include <random>

#include "doctest.h"
#include "polycurv/connections.hpp"
#include "polycurv/curvature.hpp"
#include "polycurv/shapes.hpp"
#include "support.hpp"

using namespace polycurv;

TEST_CASE("levi-civita transports") {
    SUBCASE("coplanar neighbors carry the identity") {
        TriMesh grid = shapes::planar_grid(2);
        LeviCivita lc = build_levi_civita(grid);
        for (const RidgeTransport& rt : lc.transports) {
            Mat3 diff = rt.rotation;
            diff.m[0][0] -= 1; diff.m[1][1] -= 1; diff.m[2][2] -= 1;
            double worst = 0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(diff.m[i][j]));
            CHECK(worst < 1e-14);
        }
    }
    SUBCASE("right-angle ridge: quarter turn taking one normal to the other") {
        TriMesh cube = shapes::unit_cube();
        LeviCivita lc = build_levi_civita(cube);
        for (const RidgeTransport& rt : lc.transports) {
            Vec3 n1 = cube.face_normal(rt.faces[0]);
            Vec3 n2 = cube.face_normal(rt.faces[1]);
            CHECK(norm(rt.rotation * n1 - n2) < 1e-13);
            double theta = edge_mean_curvature(cube, rt.edge).theta;
            if (theta > 0.1) CHECK(theta == doctest::Approx(kPi / 2).epsilon(1e-13));
        }
    }
    SUBCASE("transport is orthogonal, preserves inner products, respects the splitting") {
        std::mt19937_64 rng(201);
        TriMesh mesh = testsupport::perturbed(shapes::icosphere(1), 0.05, 202);
        LeviCivita lc = build_levi_civita(mesh);
        for (const RidgeTransport& rt : lc.transports) {
            CHECK(rt.rotation.orthogonality_defect() < 1e-12);
            CHECK(rt.rotation.det() == doctest::Approx(1.0).epsilon(1e-12));
            // tangent fibers map onto tangent fibers, normals onto normals
            const auto& t_from = lc.tangent.fibers[rt.faces[0]];
            Vec3 n_to = lc.normal.fibers[rt.faces[1]][0];
            for (const Vec3& b : t_from)
                CHECK(std::abs(dot(rt.rotation * b, n_to)) < 1e-10);
            CHECK(norm(rt.rotation * lc.normal.fibers[rt.faces[0]][0] - n_to) < 1e-10);
        }
        // 100 random vector pairs keep their inner product
        for (int trial = 0; trial < 100; ++trial) {
            const RidgeTransport& rt = lc.transports[rng() % lc.transports.size()];
            Vec3 u = testsupport::random_unit(rng) * testsupport::uniform(rng, 0.5, 2.0);
            Vec3 v = testsupport::random_unit(rng) * testsupport::uniform(rng, 0.5, 2.0);
            CHECK(std::abs(dot(rt.rotation * u, rt.rotation * v) - dot(u, v)) < 1e-12);
        }
    }
    SUBCASE("fiber bases are orthonormal and tangent to their facet") {
        TriMesh mesh = testsupport::perturbed(shapes::icosphere(1), 0.04, 203);
        LeviCivita lc = build_levi_civita(mesh);
        for (FaceId f = 0; f < mesh.face_count(); ++f) {
            const auto& t = lc.tangent.fibers[f];
            Vec3 n = lc.normal.fibers[f][0];
            CHECK(std::abs(norm(t[0]) - 1) < 1e-12);
            CHECK(std::abs(norm(t[1]) - 1) < 1e-12);
            CHECK(std::abs(dot(t[0], t[1])) < 1e-12);
            CHECK(std::abs(dot(t[0], n)) < 1e-12);
            CHECK(std::abs(dot(t[1], n)) < 1e-12);
            CHECK(norm(n - mesh.face_normal(f)) < 1e-12);
        }
    }
}

TEST_CASE("vertex holonomy equals the angle defect") {
    SUBCASE("flat interior vertex: identity") {
        TriMesh grid = shapes::planar_grid(4);
        for (VertexId v = 0; v < grid.vertex_count(); ++v) {
            if (grid.vertex_is_boundary(v)) continue;
            HolonomyResult h = vertex_holonomy(grid, v);
            CHECK(std::abs(h.angle) < 1e-13);
            CHECK(h.normal_deviation < 1e-13);
        }
    }
    SUBCASE("icosahedron vertex: pi/3") {
        TriMesh ico = shapes::icosahedron();
        HolonomyResult h = vertex_holonomy(ico, 4);
        CHECK(std::abs(wrap_angle(h.angle - kPi / 3)) < 1e-10);
    }
    SUBCASE("cube corner: pi/2") {
        TriMesh cube = shapes::unit_cube();
        HolonomyResult h = vertex_holonomy(cube, 0);
        CHECK(std::abs(wrap_angle(h.angle - kPi / 2)) < 1e-10);
    }
    SUBCASE("holonomy theorem over whole test meshes") {
        for (const TriMesh& mesh :
             {shapes::unit_cube(), shapes::icosphere(2), shapes::torus(8, 3), shapes::genus2(),
              testsupport::perturbed(shapes::icosphere(1), 0.05, 211)}) {
            LeviCivita lc = build_levi_civita(mesh);
            bool defects_small = true;
            for (VertexId v = 0; v < mesh.vertex_count(); ++v)
                if (std::abs(gauss_curvature(mesh, v)) >= kPi) defects_small = false;
            for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
                HolonomyResult h = vertex_holonomy(mesh, lc, v);
                CHECK(std::abs(wrap_angle(h.angle - h.angle_defect)) < 1e-10);
                CHECK(h.normal_deviation < 1e-10);
                CHECK(h.orthogonality_defect < 1e-12);
                CHECK(h.angle_defect == doctest::Approx(gauss_curvature(mesh, v)).epsilon(1e-14));
                if (defects_small)  // no wrap-around: equality without the mod
                    CHECK(std::abs(h.angle - h.angle_defect) < 1e-10);
            }
        }
    }
    SUBCASE("reverse loop composes to the inverse") {
        TriMesh mesh = testsupport::perturbed(shapes::icosphere(1), 0.05, 212);
        LeviCivita lc = build_levi_civita(mesh);
        for (VertexId v : {0, 13, 27}) {
            HolonomyResult forward = vertex_holonomy(mesh, lc, v);
            // walk the same star clockwise, using inverse ridge steps
            VertexStar star = vertex_star(mesh, v);
            Mat3 reverse = Mat3::identity();
            HalfedgeId h0 = mesh.outgoing_halfedge(v);
            HalfedgeId h = h0;
            do {
                HalfedgeId into = TriMesh::prev(h);
                const RidgeTransport& rt = lc.transports[lc.transport_of_edge[mesh.edge(into)]];
                Mat3 step = (rt.faces[0] == TriMesh::face(h)) ? rt.rotation : rt.rotation.transposed();
                reverse = reverse * step.transposed();
                h = mesh.twin(into);
            } while (h != h0);
            Mat3 product = forward.ambient * reverse;
            // reverse is the right inverse of the forward composition
            double worst = 0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    worst = std::max(worst, std::abs(product.m[i][j] - ((i == j) ? 1.0 : 0.0)));
            CHECK(worst < 1e-12);
        }
    }
    SUBCASE("boundary vertex raises") {
        CHECK_THROWS_AS(vertex_holonomy(shapes::single_triangle(), 0), ConnectionError);
    }
}

TEST_CASE("curve normal holonomy") {
    SUBCASE("planar polygon: zero mod 2 pi, trivial tangent holonomy") {
        PolyCurve square{{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, true};
        CurveHolonomy h = curve_normal_holonomy(square);
        CHECK(std::abs(wrap_angle(h.angle)) < 1e-12);
        CHECK(h.tangent_coefficient == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("matches the parallel-frame closure angle on random curves") {
        std::mt19937_64 rng(221);
        for (int trial = 0; trial < 30; ++trial) {
            PolyCurve c = testsupport::random_closed_polygon(rng, 5 + int(rng() % 6));
            CurveHolonomy h = curve_normal_holonomy(c);
            WritheResult w = writhe(c, /*want_real=*/false);
            CHECK(std::abs(wrap_angle(h.angle - w.angle_mod_2pi)) < 1e-12);
            CHECK(h.tangent_coefficient == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(h.ambient.orthogonality_defect() < 1e-12);
        }
    }
    SUBCASE("nonplanar quadrilateral: writhe mod 2 pi") {
        PolyCurve quad{{{0, 0, 0}, {1, 0, 0}, {1, 1, 1}, {0, 1, 0}}, true};
        CurveHolonomy h = curve_normal_holonomy(quad);
        double wr = writhe_gauss_radians(quad);
        CHECK(std::abs(wrap_angle(h.angle - wr)) < 1e-6);
    }
    SUBCASE("errors") {
        PolyCurve open{{{0, 0, 0}, {1, 0, 0}, {1, 1, 1}}, false};
        CHECK_THROWS_AS(curve_normal_holonomy(open), ConnectionError);
        PolyCurve hairpin{{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {1, 0, 0}}, true};
        CHECK_THROWS_AS(curve_normal_holonomy(hairpin), std::runtime_error);
    }
}
