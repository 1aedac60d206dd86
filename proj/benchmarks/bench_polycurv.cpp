#include <benchmark/benchmark.h>

#include <cmath>

#include "polycurv/connections.hpp"
#include "polycurv/curvature.hpp"
#include "polycurv/curve.hpp"
#include "polycurv/relations.hpp"
#include "polycurv/shapes.hpp"
#include "polycurv/variational.hpp"

using namespace polycurv;

namespace {

TriMesh bench_mesh(int level) { return shapes::icosphere(level); }

PolyCurve bench_curve(int n) {
    PolyCurve c;
    c.closed = true;
    for (int k = 0; k < n; ++k) {
        double t = 2.0 * kPi * k / n + 0.05;
        double r = 2.0 + std::cos(3 * t);
        c.points.push_back({r * std::cos(2 * t), r * std::sin(2 * t), std::sin(3 * t)});
    }
    return c;
}

}  // namespace

static void BM_MeshBuild(benchmark::State& state) {
    TriMesh mesh = bench_mesh(static_cast<int>(state.range(0)));
    std::vector<Vec3> pts(mesh.positions().begin(), mesh.positions().end());
    std::vector<std::array<VertexId, 3>> tris(mesh.triangles().begin(), mesh.triangles().end());
    for (auto _ : state) {
        TriMesh rebuilt(pts, tris);
        benchmark::DoNotOptimize(rebuilt.edge_count());
    }
}
BENCHMARK(BM_MeshBuild)->Arg(2)->Arg(3);

static void BM_VertexCurvatureSweep(benchmark::State& state) {
    TriMesh mesh = bench_mesh(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        double total = 0.0;
        for (VertexId v = 0; v < mesh.vertex_count(); ++v)
            total += norm(vertex_mean_curvature(mesh, v));
        benchmark::DoNotOptimize(total);
    }
}
BENCHMARK(BM_VertexCurvatureSweep)->Arg(2)->Arg(3);

static void BM_AreaGradient(benchmark::State& state) {
    TriMesh mesh = bench_mesh(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        GradientField g = area_gradient(mesh);
        benchmark::DoNotOptimize(g.gradient.data());
    }
}
BENCHMARK(BM_AreaGradient)->Arg(2)->Arg(3);

static void BM_VertexHolonomySweep(benchmark::State& state) {
    TriMesh mesh = bench_mesh(static_cast<int>(state.range(0)));
    LeviCivita lc = build_levi_civita(mesh);
    for (auto _ : state) {
        double total = 0.0;
        for (VertexId v = 0; v < mesh.vertex_count(); ++v)
            total += vertex_holonomy(mesh, lc, v).angle;
        benchmark::DoNotOptimize(total);
    }
}
BENCHMARK(BM_VertexHolonomySweep)->Arg(2);

static void BM_WritheClosedForm(benchmark::State& state) {
    PolyCurve curve = bench_curve(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        double w = writhe_gauss_radians(curve);
        benchmark::DoNotOptimize(w);
    }
}
BENCHMARK(BM_WritheClosedForm)->Arg(48)->Arg(192);

static void BM_SteinerMonteCarlo(benchmark::State& state) {
    TriMesh cube = shapes::unit_cube();
    for (auto _ : state) {
        SteinerEvaluation ev =
            steiner_polynomial(cube, 0.5, static_cast<std::uint64_t>(state.range(0)), 7);
        benchmark::DoNotOptimize(ev.mc_volume);
    }
}
BENCHMARK(BM_SteinerMonteCarlo)->Arg(100000)->Arg(1000000);

static void BM_FlowSteps(benchmark::State& state) {
    TriMesh disk = shapes::disk(12, 4);
    std::vector<Vec3> pts(disk.positions().begin(), disk.positions().end());
    for (VertexId v = 0; v < disk.vertex_count(); ++v)
        if (!disk.vertex_is_boundary(v)) pts[v].z += 0.01 * ((v % 7) - 3);
    TriMesh bumpy(pts, {disk.triangles().begin(), disk.triangles().end()});
    FlowOptions opt;
    opt.fix_boundary = true;
    opt.max_steps = 10;
    opt.step_size = 0.1;
    opt.tolerance = 0.0;
    for (auto _ : state) {
        FlowState s = minimize_area(bumpy, opt);
        benchmark::DoNotOptimize(s.iterations);
    }
}
BENCHMARK(BM_FlowSteps);

BENCHMARK_MAIN();
