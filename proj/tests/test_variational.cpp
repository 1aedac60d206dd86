#include <cmath>
#include <random>

#include "doctest.h"
#include "polycurv/curvature.hpp"
#include "polycurv/relations.hpp"
#include "polycurv/shapes.hpp"
#include "polycurv/variational.hpp"
#include "support.hpp"

using namespace polycurv;

namespace {

using Tris = std::vector<std::array<VertexId, 3>>;

double area_of(const std::vector<Vec3>& pts, const Tris& tris) {
    double area = 0.0;
    for (const auto& t : tris)
        area += 0.5 * norm(cross(pts[t[1]] - pts[t[0]], pts[t[2]] - pts[t[0]]));
    return area;
}

double volume_of(const std::vector<Vec3>& pts, const Tris& tris) {
    double vol = 0.0;
    for (const auto& t : tris) vol += dot(pts[t[0]], cross(pts[t[1]], pts[t[2]]));
    return vol / 6.0;
}

// Central finite differences of a functional of the vertex positions;
// independent of every analytic gradient path in the library.
template <class F>
std::vector<Vec3> fd_gradient(const TriMesh& mesh, double h, F&& functional) {
    std::vector<Vec3> pts(mesh.positions().begin(), mesh.positions().end());
    Tris tris(mesh.triangles().begin(), mesh.triangles().end());
    std::vector<Vec3> grad(pts.size());
    for (std::size_t v = 0; v < pts.size(); ++v)
        for (int c = 0; c < 3; ++c) {
            double saved = pts[v][c];
            pts[v][c] = saved + h;
            double fp = functional(pts, tris);
            pts[v][c] = saved - h;
            double fm = functional(pts, tris);
            pts[v][c] = saved;
            grad[v][c] = (fp - fm) / (2.0 * h);
        }
    return grad;
}

// Open tube: nz rings of nseg vertices each, wrapping in angle. The first
// and last rings form the two boundary circles.
TriMesh tube(int nseg, int nz, double radius, double half_height) {
    std::vector<Vec3> pts;
    for (int j = 0; j < nz; ++j) {
        double z = -half_height + 2.0 * half_height * j / (nz - 1);
        for (int i = 0; i < nseg; ++i) {
            double a = 2.0 * kPi * i / nseg;
            pts.push_back({radius * std::cos(a), radius * std::sin(a), z});
        }
    }
    Tris tris;
    auto id = [&](int j, int i) { return j * nseg + (i % nseg); };
    for (int j = 0; j + 1 < nz; ++j)
        for (int i = 0; i < nseg; ++i) {
            tris.push_back({id(j, i), id(j, i + 1), id(j + 1, i + 1)});
            tris.push_back({id(j, i), id(j + 1, i + 1), id(j + 1, i)});
        }
    return TriMesh(std::move(pts), std::move(tris));
}

}  // namespace

TEST_CASE("area gradient") {
    SUBCASE("planar interior vertices have zero gradient") {
        TriMesh grid = shapes::planar_grid(4);
        GradientField g = area_gradient(grid);
        for (VertexId v = 0; v < grid.vertex_count(); ++v)
            if (!grid.vertex_is_boundary(v)) CHECK(norm(g.gradient[v]) < 1e-13);
    }
    SUBCASE("matches central finite differences everywhere") {
        for (std::uint64_t seed : {301ull, 302ull}) {
            TriMesh mesh = testsupport::perturbed(shapes::icosphere(1), 0.06, seed);
            double h = 1e-5 * mesh.bbox_diagonal();
            auto fd = fd_gradient(mesh, h, [](const auto& pts, const auto& tris) {
                return area_of(pts, tris);
            });
            GradientField g = area_gradient(mesh);
            for (VertexId v = 0; v < mesh.vertex_count(); ++v)
                CHECK(norm(g.gradient[v] - fd[v]) <= 1e-5 * std::max(norm(g.gradient[v]), 1e-6));
        }
    }
    SUBCASE("cotangent route equals the 90-degree rotation route") {
        TriMesh mesh = testsupport::perturbed(shapes::disk(8, 3), 0.05, 303);
        GradientField a = area_gradient(mesh);
        GradientField b = area_gradient_rotation(mesh);
        for (VertexId v = 0; v < mesh.vertex_count(); ++v)
            CHECK(norm(a.gradient[v] - b.gradient[v]) < 1e-12);
    }
    SUBCASE("equals minus the mean-curvature vector at interior vertices") {
        TriMesh mesh = testsupport::perturbed(shapes::icosphere(1), 0.05, 304);
        GradientField g = area_gradient(mesh);
        for (VertexId v = 0; v < mesh.vertex_count(); ++v)
            CHECK(norm(g.gradient[v] + vertex_mean_curvature(mesh, v)) < 1e-12);
    }
}

TEST_CASE("volume gradient") {
    SUBCASE("gradients of a closed mesh sum to zero") {
        GradientField g = volume_gradient(shapes::unit_cube());
        Vec3 sum{};
        for (const Vec3& v : g.gradient) sum += v;
        CHECK(norm(sum) < 1e-14);
    }
    SUBCASE("matches central finite differences") {
        TriMesh mesh = testsupport::perturbed(shapes::icosphere(1), 0.05, 311);
        double h = 1e-5 * mesh.bbox_diagonal();
        auto fd = fd_gradient(mesh, h, [](const auto& pts, const auto& tris) {
            return volume_of(pts, tris);
        });
        GradientField g = volume_gradient(mesh);
        for (VertexId v = 0; v < mesh.vertex_count(); ++v)
            CHECK(norm(g.gradient[v] - fd[v]) <= 1e-6 * std::max(norm(g.gradient[v]), 1e-6));
    }
    SUBCASE("icosphere gradients are radial and equal the vector area") {
        TriMesh ico = shapes::icosphere(1);
        GradientField g = volume_gradient(ico);
        for (VertexId v = 0; v < ico.vertex_count(); ++v) {
            CHECK(norm(cross(g.gradient[v], normalized(ico.position(v)))) < 1e-12);
            CHECK(norm(g.gradient[v] - vector_area(ico, v)) < 1e-13);
        }
    }
    SUBCASE("open mesh raises") {
        CHECK_THROWS_AS(volume_gradient(shapes::disk(6, 2)), VariationalError);
    }
}

TEST_CASE("dirichlet energy") {
    TriMesh mesh = testsupport::perturbed(shapes::disk(8, 3), 0.04, 321);
    std::vector<Vec3> id(mesh.positions().begin(), mesh.positions().end());

    SUBCASE("identity map: energy equals area") {
        CHECK(std::abs(dirichlet_energy(mesh, id) - total_area(mesh)) < 1e-10);
    }
    SUBCASE("constant map: zero") {
        std::vector<Vec3> constant(id.size(), Vec3{0.3, -0.7, 2.0});
        CHECK(dirichlet_energy(mesh, constant) < 1e-14);
    }
    SUBCASE("uniform scaling is quadratic") {
        std::vector<Vec3> twice = id;
        for (Vec3& p : twice) p *= 2.0;
        CHECK(dirichlet_energy(mesh, twice) ==
              doctest::Approx(4.0 * total_area(mesh)).epsilon(1e-12));
    }
    SUBCASE("agrees with the cotangent quadratic form") {
        std::mt19937_64 rng(322);
        std::vector<Vec3> f = id;
        for (Vec3& p : f) p += testsupport::random_unit(rng) * 0.1;
        double quad = 0.0;
        for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
            CotangentWeights w = cotangent_weights(mesh, v);
            for (std::size_t i = 0; i < w.neighbors.size(); ++i)
                quad += w.weight[i] * norm2(f[v] - f[w.neighbors[i]]);
        }
        quad /= 8.0;  // each edge counted from both ends: E = 1/4 sum_e w |df|^2
        CHECK(dirichlet_energy(mesh, f) == doctest::Approx(quad).epsilon(1e-12));
    }
    SUBCASE("dominates the image area") {
        std::mt19937_64 rng(323);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<Vec3> f = id;
            for (Vec3& p : f) p += testsupport::random_unit(rng) * 0.15;
            Tris tris(mesh.triangles().begin(), mesh.triangles().end());
            CHECK(dirichlet_energy(mesh, f) >= area_of(f, tris) - 1e-10);
        }
    }
    SUBCASE("size mismatch raises") {
        std::vector<Vec3> wrong(3);
        CHECK_THROWS_AS(dirichlet_energy(mesh, wrong), VariationalError);
    }
}

TEST_CASE("harmonic residual") {
    SUBCASE("identity map: residual is the mean-curvature vector") {
        TriMesh mesh = testsupport::perturbed(shapes::icosphere(1), 0.05, 331);
        std::vector<Vec3> id(mesh.positions().begin(), mesh.positions().end());
        std::vector<Vec3> r = harmonic_residual(mesh, id);
        for (VertexId v = 0; v < mesh.vertex_count(); ++v)
            CHECK(norm(r[v] - vertex_mean_curvature(mesh, v)) < 1e-12);
    }
    SUBCASE("linear maps of a flat mesh are harmonic") {
        TriMesh grid = shapes::planar_grid(4);
        Mat3 a = Mat3::axis_angle(normalized(Vec3{1, 2, 3}), 0.7);
        a.m[0][0] *= 1.5;  // generic linear map, not just a rotation
        std::vector<Vec3> f;
        for (VertexId v = 0; v < grid.vertex_count(); ++v)
            f.push_back(a * grid.position(v) + Vec3{0.1, 0.2, -0.3});
        std::vector<Vec3> r = harmonic_residual(grid, f);
        for (VertexId v = 0; v < grid.vertex_count(); ++v)
            if (!grid.vertex_is_boundary(v)) CHECK(norm(r[v]) < 1e-12);
    }
    SUBCASE("residual is minus the energy gradient in the image variables") {
        TriMesh mesh = testsupport::perturbed(shapes::disk(8, 2), 0.03, 332);
        std::mt19937_64 rng(333);
        std::vector<Vec3> f(mesh.positions().begin(), mesh.positions().end());
        for (Vec3& p : f) p += testsupport::random_unit(rng) * 0.05;
        std::vector<Vec3> r = harmonic_residual(mesh, f);

        double h = 1e-5 * mesh.bbox_diagonal();
        for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
            if (mesh.vertex_is_boundary(v)) continue;
            Vec3 fd{};
            for (int c = 0; c < 3; ++c) {
                double saved = f[v][c];
                f[v][c] = saved + h;
                double ep = dirichlet_energy(mesh, f);
                f[v][c] = saved - h;
                double em = dirichlet_energy(mesh, f);
                f[v][c] = saved;
                fd[c] = (ep - em) / (2.0 * h);
            }
            CHECK(norm(r[v] + fd) <= 1e-5 * std::max(norm(r[v]), 1e-6));
        }
    }
    SUBCASE("residual reports aggregate over interior vertices") {
        TriMesh mesh = testsupport::perturbed(shapes::icosphere(1), 0.05, 334);
        ResidualReport rep = minimality_residuals(mesh);
        CHECK(rep.max > 0.0);
        CHECK(rep.rms > 0.0);
        CHECK(rep.rms <= rep.max);
        ResidualReport cmc = cmc_residuals(mesh, -2.0);
        CHECK(cmc.value.size() == static_cast<std::size_t>(mesh.vertex_count()));
    }
}

TEST_CASE("area minimization") {
    SUBCASE("perturbed flat square with fixed boundary flattens out") {
        TriMesh grid = shapes::planar_grid(3);
        std::vector<Vec3> pts(grid.positions().begin(), grid.positions().end());
        std::mt19937_64 rng(341);
        for (VertexId v = 0; v < grid.vertex_count(); ++v)
            if (!grid.vertex_is_boundary(v)) pts[v].z += testsupport::uniform(rng, -0.05, 0.05);
        TriMesh bumpy(pts, {grid.triangles().begin(), grid.triangles().end()});

        FlowOptions opt;
        opt.fix_boundary = true;
        opt.max_steps = 1000;
        opt.step_size = 0.2;
        opt.tolerance = 1e-8;
        FlowState state = minimize_area(bumpy, opt);
        CHECK(state.status == FlowStatus::Converged);
        CHECK(state.max_residual < 1e-8);
        // area trace is non-increasing across accepted steps
        for (std::size_t i = 1; i < state.trace.size(); ++i)
            CHECK(state.trace[i].area <= state.trace[i - 1].area * (1 + 1e-14));
    }
    SUBCASE("tube between fixed rings reaches a discrete minimal state") {
        TriMesh cyl = tube(24, 5, 1.0, 0.25);
        FlowOptions opt;
        opt.fix_boundary = true;
        opt.max_steps = 4000;
        opt.step_size = 0.3;
        opt.tolerance = 1e-6;
        FlowState state = minimize_area(cyl, opt);
        CHECK(state.status == FlowStatus::Converged);
        CHECK(state.max_residual < 1e-6);
        for (std::size_t i = 1; i < state.trace.size(); ++i)
            CHECK(state.trace[i].area <= state.trace[i - 1].area * (1 + 1e-14));
        // the waist pulls inward, catenoid-like
        double waist = 0.0;
        int mid_ring = 2 * 24;
        for (int i = 0; i < 24; ++i) {
            Vec3 p = state.mesh.position(mid_ring + i);
            waist += std::sqrt(p.x * p.x + p.y * p.y) / 24.0;
        }
        CHECK(waist < 0.99);
    }
    SUBCASE("volume-constrained icosphere settles into a CMC state") {
        TriMesh ico = shapes::icosphere(1);
        double vol0 = enclosed_volume(ico);
        FlowOptions opt;
        opt.constraint = FlowConstraint::Volume;
        opt.max_steps = 4000;
        opt.step_size = 0.2;
        opt.tolerance = 1e-9;
        FlowState state = minimize_area(ico, opt);
        CHECK(enclosed_volume(state.mesh) ==
              doctest::Approx(vol0).epsilon(1e-9));
        CHECK(state.cmc_h < 0.0);  // outward normals: sphere-like H is negative
        // relative CMC residual per vertex
        for (VertexId v = 0; v < state.mesh.vertex_count(); ++v) {
            Vec3 hp = vertex_mean_curvature(state.mesh, v);
            Vec3 ap = vector_area(state.mesh, v);
            CHECK(norm(hp - ap * state.cmc_h) <= 1e-4 * norm(hp));
        }
    }
    SUBCASE("translation equivariance of the flow") {
        TriMesh grid = shapes::planar_grid(2);
        std::vector<Vec3> pts(grid.positions().begin(), grid.positions().end());
        pts[4].z = 0.08;  // center vertex of the 3x3 grid
        TriMesh bumpy(pts, {grid.triangles().begin(), grid.triangles().end()});
        Vec3 shift{0.3, -0.2, 0.5};
        TriMesh moved = testsupport::translated(bumpy, shift);

        FlowOptions opt;
        opt.fix_boundary = true;
        opt.max_steps = 100;
        opt.step_size = 0.2;
        opt.tolerance = 0.0;  // run all 100 steps
        FlowState a = minimize_area(bumpy, opt);
        FlowState b = minimize_area(moved, opt);
        for (VertexId v = 0; v < a.mesh.vertex_count(); ++v)
            CHECK(norm(a.mesh.position(v) + shift - b.mesh.position(v)) < 1e-9);
    }
    SUBCASE("unconstrained flow with nothing fixed is rejected") {
        FlowOptions opt;
        CHECK_THROWS_AS(minimize_area(shapes::icosphere(1), opt), VariationalError);
        opt.step_size = -1.0;
        opt.fix_boundary = true;
        CHECK_THROWS_AS(minimize_area(shapes::disk(6, 2), opt), VariationalError);
    }
    SUBCASE("oversized steps are halved, never increasing area") {
        TriMesh grid = shapes::planar_grid(3);
        std::vector<Vec3> pts(grid.positions().begin(), grid.positions().end());
        std::mt19937_64 rng(342);
        for (VertexId v = 0; v < grid.vertex_count(); ++v)
            if (!grid.vertex_is_boundary(v)) pts[v].z += testsupport::uniform(rng, -0.1, 0.1);
        TriMesh bumpy(pts, {grid.triangles().begin(), grid.triangles().end()});
        FlowOptions opt;
        opt.fix_boundary = true;
        opt.max_steps = 60;
        opt.step_size = 50.0;  // absurdly large; backtracking must save it
        opt.tolerance = 1e-8;
        FlowState state = minimize_area(bumpy, opt);
        for (std::size_t i = 1; i < state.trace.size(); ++i)
            CHECK(state.trace[i].area <= state.trace[i - 1].area * (1 + 1e-14));
    }
}
