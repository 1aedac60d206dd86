#include "polycurv/variational.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "polycurv/curvature.hpp"
#include "polycurv/relations.hpp"

namespace polycurv {

namespace {

double guarded_cot(const Vec3& u, const Vec3& v) {
    Vec3 c = cross(u, v);
    double cn = norm(c);
    if (cn < 1e-14 * norm(u) * norm(v))
        throw VariationalError("degenerate corner: cotangent guard tripped");
    return dot(u, v) / cn;
}

}  // namespace

GradientField area_gradient(const TriMesh& mesh) {
    GradientField field;
    field.gradient.assign(mesh.vertex_count(), Vec3{});
    // Per triangle (p,a,b): grad_p Area = 1/2 (cot(angle at b)(p-a) + cot(angle at a)(p-b)).
    for (FaceId f = 0; f < mesh.face_count(); ++f) {
        const auto& t = mesh.triangle(f);
        for (int k = 0; k < 3; ++k) {
            Vec3 p = mesh.position(t[k]);
            Vec3 a = mesh.position(t[(k + 1) % 3]);
            Vec3 b = mesh.position(t[(k + 2) % 3]);
            double cot_b = guarded_cot(p - b, a - b);
            double cot_a = guarded_cot(p - a, b - a);
            field.gradient[t[k]] += ((p - a) * cot_b + (p - b) * cot_a) * 0.5;
        }
    }
    return field;
}

GradientField area_gradient_rotation(const TriMesh& mesh) {
    GradientField field;
    field.gradient.assign(mesh.vertex_count(), Vec3{});
    // grad_p Area(T) = 1/2 n x (opposite edge), the in-plane 90-degree
    // rotation of the edge across from p.
    for (FaceId f = 0; f < mesh.face_count(); ++f) {
        const auto& t = mesh.triangle(f);
        Vec3 n = mesh.face_normal(f);
        for (int k = 0; k < 3; ++k) {
            Vec3 a = mesh.position(t[(k + 1) % 3]);
            Vec3 b = mesh.position(t[(k + 2) % 3]);
            field.gradient[t[k]] += cross(n, b - a) * 0.5;
        }
    }
    return field;
}

GradientField volume_gradient(const TriMesh& mesh) {
    if (!compute_topology(mesh).is_closed)
        throw VariationalError("volume gradient needs a closed mesh");
    GradientField field;
    field.gradient.assign(mesh.vertex_count(), Vec3{});
    // grad_p of sum det(a,b,c)/6: each face (p,a,b) contributes (a x b)/6.
    for (FaceId f = 0; f < mesh.face_count(); ++f) {
        const auto& t = mesh.triangle(f);
        for (int k = 0; k < 3; ++k) {
            Vec3 a = mesh.position(t[(k + 1) % 3]);
            Vec3 b = mesh.position(t[(k + 2) % 3]);
            field.gradient[t[k]] += cross(a, b) / 6.0;
        }
    }
    return field;
}

double dirichlet_energy(const TriMesh& domain, std::span<const Vec3> f) {
    if (static_cast<int>(f.size()) != domain.vertex_count())
        throw VariationalError("image size does not match the domain vertex count");
    double energy = 0.0;
    for (FaceId fc = 0; fc < domain.face_count(); ++fc) {
        const auto& t = domain.triangle(fc);
        Vec3 p0 = domain.position(t[0]);
        Vec3 e1 = domain.position(t[1]) - p0;
        Vec3 e2 = domain.position(t[2]) - p0;
        // orthonormal 2D frame in the domain triangle
        Vec3 u = normalized(e1);
        Vec3 n = cross(e1, e2);
        double area = 0.5 * norm(n);
        Vec3 v = normalized(cross(normalized(n), u));
        double x1 = dot(e1, u);                   // e1 = (x1, 0)
        double x2 = dot(e2, u), y2 = dot(e2, v);  // e2 = (x2, y2)
        if (x1 == 0.0 || y2 == 0.0) throw VariationalError("degenerate domain triangle");
        Vec3 g1 = f[t[1]] - f[t[0]];
        Vec3 g2 = f[t[2]] - f[t[0]];
        // affine map L with L*(x1,0) = g1, L*(x2,y2) = g2
        Vec3 col_u = g1 / x1;
        Vec3 col_v = (g2 - col_u * x2) / y2;
        energy += 0.5 * (norm2(col_u) + norm2(col_v)) * area;
    }
    return energy;
}

std::vector<Vec3> harmonic_residual(const TriMesh& domain, std::span<const Vec3> f) {
    if (static_cast<int>(f.size()) != domain.vertex_count())
        throw VariationalError("image size does not match the domain vertex count");
    std::vector<Vec3> residual(domain.vertex_count(), Vec3{});
    // Accumulate the cotangent weights triangle by triangle; weights come
    // from the domain metric, the differences from the image.
    for (FaceId fc = 0; fc < domain.face_count(); ++fc) {
        const auto& t = domain.triangle(fc);
        for (int k = 0; k < 3; ++k) {
            VertexId vp = t[k], va = t[(k + 1) % 3], vb = t[(k + 2) % 3];
            Vec3 p = domain.position(vp), a = domain.position(va), b = domain.position(vb);
            // cot at b is the weight of edge p-a seen from this triangle
            double cot_b = guarded_cot(p - b, a - b);
            double cot_a = guarded_cot(p - a, b - a);
            residual[vp] += ((f[va] - f[vp]) * cot_b + (f[vb] - f[vp]) * cot_a) * 0.5;
        }
    }
    for (VertexId v = 0; v < domain.vertex_count(); ++v)
        if (domain.vertex_is_boundary(v)) residual[v] = Vec3{};
    return residual;
}

namespace {

ResidualReport finish_report(const TriMesh& mesh, std::vector<double> value) {
    ResidualReport report;
    report.value = std::move(value);
    double sum2 = 0.0;
    int count = 0;
    for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
        if (mesh.vertex_is_boundary(v) || mesh.vertex_is_isolated(v)) continue;
        report.max = std::max(report.max, report.value[v]);
        sum2 += report.value[v] * report.value[v];
        ++count;
    }
    report.rms = count ? std::sqrt(sum2 / count) : 0.0;
    return report;
}

}  // namespace

ResidualReport minimality_residuals(const TriMesh& mesh) {
    std::vector<double> value(mesh.vertex_count(), 0.0);
    for (VertexId v = 0; v < mesh.vertex_count(); ++v)
        if (!mesh.vertex_is_boundary(v) && !mesh.vertex_is_isolated(v))
            value[v] = norm(vertex_mean_curvature(mesh, v));
    return finish_report(mesh, std::move(value));
}

ResidualReport cmc_residuals(const TriMesh& mesh, double h) {
    std::vector<double> value(mesh.vertex_count(), 0.0);
    for (VertexId v = 0; v < mesh.vertex_count(); ++v)
        if (!mesh.vertex_is_boundary(v) && !mesh.vertex_is_isolated(v))
            value[v] = norm(vertex_mean_curvature(mesh, v) - vector_area(mesh, v) * h);
    return finish_report(mesh, std::move(value));
}

ResidualReport harmonic_residuals(const TriMesh& domain, std::span<const Vec3> f) {
    std::vector<Vec3> r = harmonic_residual(domain, f);
    std::vector<double> value(domain.vertex_count(), 0.0);
    for (VertexId v = 0; v < domain.vertex_count(); ++v) value[v] = norm(r[v]);
    return finish_report(domain, std::move(value));
}

namespace {

bool positions_finite(const std::vector<Vec3>& pts) {
    for (const Vec3& p : pts)
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) return false;
    return true;
}

// Rebuild attempts throw MeshError on degenerate triangles; the flow treats
// that as a failed step and backtracks.
std::optional<TriMesh> try_mesh(std::vector<Vec3> pts,
                                const std::vector<std::array<VertexId, 3>>& tris) {
    try {
        return TriMesh(std::move(pts), std::vector<std::array<VertexId, 3>>(tris));
    } catch (const MeshError&) {
        return std::nullopt;
    }
}

}  // namespace

FlowState minimize_area(const TriMesh& mesh, const FlowOptions& options) {
    if (options.step_size <= 0) throw VariationalError("step size must be positive");

    std::vector<bool> fixed(mesh.vertex_count(), false);
    for (VertexId v : options.fixed) {
        if (v < 0 || v >= mesh.vertex_count()) throw VariationalError("fixed vertex out of range");
        fixed[v] = true;
    }
    if (options.fix_boundary)
        for (VertexId v = 0; v < mesh.vertex_count(); ++v)
            if (mesh.vertex_is_boundary(v)) fixed[v] = true;
    bool any_fixed = std::find(fixed.begin(), fixed.end(), true) != fixed.end();
    if (options.constraint == FlowConstraint::None && !any_fixed)
        throw VariationalError("unconstrained flow needs a nonempty fixed set");

    const std::vector<std::array<VertexId, 3>> tris(mesh.triangles().begin(),
                                                    mesh.triangles().end());
    std::vector<Vec3> pts(mesh.positions().begin(), mesh.positions().end());

    const bool volume_constrained = options.constraint == FlowConstraint::Volume;
    FlowState state{.mesh = TriMesh(pts, tris), .status = FlowStatus::MaxSteps,
                    .iterations = 0, .max_residual = 0.0, .cmc_h = 0.0, .trace = {}, .message = {}};
    const double volume0 = volume_constrained ? enclosed_volume(state.mesh) : 0.0;

    auto free_max_h = [&](const TriMesh& m) {
        double mx = 0.0;
        for (VertexId v = 0; v < m.vertex_count(); ++v)
            if (!fixed[v] && !m.vertex_is_boundary(v) && !m.vertex_is_isolated(v))
                mx = std::max(mx, norm(vertex_mean_curvature(m, v)));
        return mx;
    };
    auto cmc_estimate = [&](const TriMesh& m) {
        double num = 0.0, den = 0.0;
        for (VertexId v = 0; v < m.vertex_count(); ++v) {
            if (fixed[v] || m.vertex_is_boundary(v) || m.vertex_is_isolated(v)) continue;
            Vec3 h = vertex_mean_curvature(m, v);
            Vec3 a = vector_area(m, v);
            num += dot(h, a);
            den += norm2(a);
        }
        return den > 0 ? num / den : 0.0;
    };
    auto converged = [&](const TriMesh& m, double& residual_out) {
        if (!volume_constrained) {
            residual_out = free_max_h(m);
            return residual_out < options.tolerance;
        }
        double h = cmc_estimate(m);
        double mx = 0.0;
        for (VertexId v = 0; v < m.vertex_count(); ++v)
            if (!fixed[v] && !m.vertex_is_boundary(v) && !m.vertex_is_isolated(v))
                mx = std::max(mx, norm(vertex_mean_curvature(m, v) - vector_area(m, v) * h));
        residual_out = mx;
        return mx < options.tolerance;
    };

    // Volume restoration: Newton steps along the volume gradient on free
    // vertices, repeated until the relative volume error is inside tolerance.
    auto project_volume = [&](std::vector<Vec3>& positions) -> std::optional<TriMesh> {
        std::optional<TriMesh> current = try_mesh(positions, tris);
        if (!current) return std::nullopt;
        for (int it = 0; it < 50; ++it) {
            double vol = enclosed_volume(*current);
            if (std::abs(vol - volume0) <= options.volume_tolerance * std::abs(volume0))
                return current;
            GradientField g = volume_gradient(*current);
            double g2 = 0.0;
            for (VertexId v = 0; v < current->vertex_count(); ++v)
                if (!fixed[v]) g2 += norm2(g.gradient[v]);
            if (g2 == 0.0) return std::nullopt;
            double lambda = (volume0 - vol) / g2;
            for (VertexId v = 0; v < current->vertex_count(); ++v)
                if (!fixed[v]) positions[v] += g.gradient[v] * lambda;
            current = try_mesh(positions, tris);
            if (!current) return std::nullopt;
        }
        return std::nullopt;
    };

    double step = options.step_size;
    double area_now = total_area(state.mesh);

    double residual = 0.0;
    bool done = converged(state.mesh, residual);
    state.trace.push_back({0, area_now, volume_constrained ? enclosed_volume(state.mesh) : 0.0,
                           free_max_h(state.mesh), step});

    for (int iter = 1; !done && iter <= options.max_steps; ++iter) {
        GradientField grad = area_gradient(state.mesh);
        bool accepted = false;
        for (int halving = 0; halving <= 20; ++halving) {
            std::vector<Vec3> trial = pts;
            for (VertexId v = 0; v < mesh.vertex_count(); ++v)
                if (!fixed[v]) trial[v] -= grad.gradient[v] * step;
            if (!positions_finite(trial)) {
                state.status = FlowStatus::NonFinite;
                state.message = "non-finite coordinates during step " + std::to_string(iter);
                state.max_residual = residual;
                state.cmc_h = volume_constrained ? cmc_estimate(state.mesh) : 0.0;
                state.iterations = iter - 1;
                return state;
            }
            std::optional<TriMesh> candidate =
                volume_constrained ? project_volume(trial) : try_mesh(trial, tris);
            if (candidate) {
                double area_new = total_area(*candidate);
                if (area_new <= area_now + 1e-15 * area_now) {
                    state.mesh = std::move(*candidate);
                    pts = std::move(trial);
                    area_now = area_new;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) {
            state.status = FlowStatus::DegenerateStep;
            state.message = "step rejected after 20 halvings at iteration " + std::to_string(iter);
            state.iterations = iter - 1;
            converged(state.mesh, state.max_residual);
            state.cmc_h = volume_constrained ? cmc_estimate(state.mesh) : 0.0;
            return state;
        }

        done = converged(state.mesh, residual);
        state.iterations = iter;
        state.trace.push_back({iter, area_now,
                               volume_constrained ? enclosed_volume(state.mesh) : 0.0,
                               free_max_h(state.mesh), step});
        // gentle recovery so one bad step does not freeze the schedule
        step = std::min(step * 1.5, options.step_size);
    }

    state.max_residual = residual;
    state.cmc_h = volume_constrained ? cmc_estimate(state.mesh) : 0.0;
    state.status = done ? FlowStatus::Converged : FlowStatus::MaxSteps;
    if (state.status == FlowStatus::MaxSteps)
        state.message = "tolerance not reached in " + std::to_string(options.max_steps) + " steps";
    return state;
}

}  // namespace polycurv
