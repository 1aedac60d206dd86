#include "polycurv/relations.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "polycurv/curvature.hpp"
#include "polycurv/parallel.hpp"

namespace polycurv {

namespace {

RelationReport make_report(std::string name, std::vector<double> lhs, std::vector<double> rhs,
                           double tol) {
    RelationReport r;
    r.relation = std::move(name);
    r.lhs = std::move(lhs);
    r.rhs = std::move(rhs);
    double res2 = 0.0;
    for (std::size_t i = 0; i < r.lhs.size(); ++i) {
        double d = r.lhs[i] - r.rhs[i];
        res2 += d * d;
    }
    r.residual = std::sqrt(res2);
    r.tolerance = tol;
    r.pass = r.residual <= tol;
    return r;
}

std::vector<double> to_vec(const Vec3& v) { return {v.x, v.y, v.z}; }

}  // namespace

Patch make_patch(const TriMesh& mesh, std::vector<FaceId> faces) {
    std::sort(faces.begin(), faces.end());
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    if (faces.empty()) throw RelationError("patch is empty");
    for (FaceId f : faces)
        if (f < 0 || f >= mesh.face_count()) throw RelationError("face id out of range");

    Patch patch;
    patch.faces = faces;
    std::vector<bool> in_patch(mesh.face_count(), false);
    for (FaceId f : faces) in_patch[f] = true;

    Vec3 lo, hi;
    bool first = true;
    std::set<EdgeId> interior;
    for (FaceId f : faces) {
        patch.area += mesh.face_area(f);
        for (int k = 0; k < 3; ++k) {
            HalfedgeId h = 3 * f + k;
            const Vec3& p = mesh.position(mesh.from(h));
            if (first) { lo = hi = p; first = false; }
            lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};

            HalfedgeId tw = mesh.twin(h);
            if (tw >= 0 && in_patch[TriMesh::face(tw)]) {
                interior.insert(mesh.edge(h));
            } else {
                Patch::Segment seg;
                seg.halfedge = h;
                seg.a = mesh.position(mesh.from(h));
                seg.b = mesh.position(mesh.to(h));
                Vec3 ev = seg.b - seg.a;
                seg.length = norm(ev);
                seg.conormal = normalized(cross(ev, mesh.face_normal(f)));
                patch.boundary.push_back(seg);
            }
        }
    }
    patch.interior_edges.assign(interior.begin(), interior.end());
    patch.diameter = norm(hi - lo);
    return patch;
}

Patch star_patch(const TriMesh& mesh, VertexId v) {
    VertexStar star = vertex_star(mesh, v);
    return make_patch(mesh, star.faces);
}

RelationReport check_force_balance(const TriMesh& mesh, const Patch& patch, double tol) {
    if (tol < 0) tol = 1e-12 * patch.diameter;
    Vec3 lhs{};
    for (const auto& s : patch.boundary) lhs += s.conormal * s.length;
    Vec3 rhs{};
    for (EdgeId e : patch.interior_edges) rhs += edge_mean_curvature(mesh, e).h_vec;
    return make_report("force-balance", to_vec(lhs), to_vec(rhs), tol);
}

RelationReport check_torque_balance(const TriMesh& mesh, const Patch& patch, double tol) {
    if (tol < 0) tol = 1e-10 * patch.diameter * patch.diameter;
    Vec3 lhs{};
    for (const auto& s : patch.boundary) {
        Vec3 mid = (s.a + s.b) * 0.5;
        lhs += cross(mid, s.conormal) * s.length;
    }
    Vec3 rhs{};
    for (EdgeId e : patch.interior_edges) {
        auto [a, b] = mesh.edge_vertices(e);
        Vec3 mid = (mesh.position(a) + mesh.position(b)) * 0.5;
        rhs += cross(mid, edge_mean_curvature(mesh, e).h_vec);
    }
    return make_report("torque-balance", to_vec(lhs), to_vec(rhs), tol);
}

RelationReport check_position_relation(const TriMesh& mesh, const Patch& patch, double tol) {
    if (tol < 0) tol = 1e-10 * patch.diameter * patch.diameter;
    double lhs = 0.0;
    for (const auto& s : patch.boundary) {
        Vec3 mid = (s.a + s.b) * 0.5;
        lhs += dot(mid, s.conormal) * s.length;
    }
    double rhs = 2.0 * patch.area;
    for (EdgeId e : patch.interior_edges) {
        auto [a, b] = mesh.edge_vertices(e);
        Vec3 mid = (mesh.position(a) + mesh.position(b)) * 0.5;
        rhs += dot(mid, edge_mean_curvature(mesh, e).h_vec);
    }
    return make_report("position-relation", {lhs}, {rhs}, tol);
}

RelationReport check_vector_area(const TriMesh& mesh, const Patch& patch, double tol) {
    if (tol < 0) tol = 1e-12 * patch.diameter * patch.diameter;
    Vec3 lhs{};
    for (const auto& s : patch.boundary) lhs += cross(s.a, s.b) * 0.5;
    Vec3 rhs{};
    for (FaceId f : patch.faces) rhs += mesh.face_area_vector(f);
    return make_report("vector-area", to_vec(lhs), to_vec(rhs), tol);
}

RelationReport check_gauss_bonnet(const TriMesh& mesh, double tol) {
    if (tol < 0) tol = 1e-8;
    MeshTopology topo = compute_topology(mesh);
    if (!topo.is_closed)
        throw RelationError("whole-mesh Gauss/Bonnet needs a closed mesh; use the disk form");
    double total = 0.0;
    for (VertexId v = 0; v < mesh.vertex_count(); ++v)
        if (!mesh.vertex_is_isolated(v)) total += gauss_curvature(mesh, v);
    double expected = 2.0 * kPi * topo.euler_characteristic;
    return make_report("gauss-bonnet", {total}, {expected}, tol);
}

RelationReport check_gauss_bonnet_disk(const TriMesh& mesh, const Patch& patch, double tol) {
    if (tol < 0) tol = 1e-10;

    // chi of the patch complex
    std::set<VertexId> verts;
    std::set<EdgeId> edges;
    for (FaceId f : patch.faces)
        for (int k = 0; k < 3; ++k) {
            verts.insert(mesh.triangle(f)[k]);
            edges.insert(mesh.edge(3 * f + k));
        }
    int chi = static_cast<int>(verts.size()) - static_cast<int>(edges.size()) +
              static_cast<int>(patch.faces.size());
    if (chi != 1)
        throw RelationError("patch is not a disk (chi = " + std::to_string(chi) + ")");

    std::unordered_set<VertexId> boundary_verts;
    for (const auto& s : patch.boundary) {
        boundary_verts.insert(mesh.from(s.halfedge));
        boundary_verts.insert(mesh.to(s.halfedge));
    }

    // angle sums restricted to patch triangles
    double total = 0.0;
    for (VertexId v : verts) {
        double sum = 0.0;
        for (FaceId f : patch.faces) {
            const auto& t = mesh.triangle(f);
            for (int k = 0; k < 3; ++k)
                if (t[k] == v) sum += mesh.corner_angle(f, k);
        }
        total += boundary_verts.count(v) ? (kPi - sum) : (2.0 * kPi - sum);
    }
    return make_report("gauss-bonnet-disk", {total}, {2.0 * kPi}, tol);
}

double enclosed_volume(const TriMesh& mesh) {
    double vol = 0.0;
    for (FaceId f = 0; f < mesh.face_count(); ++f) {
        const auto& t = mesh.triangle(f);
        vol += dot(mesh.position(t[0]), cross(mesh.position(t[1]), mesh.position(t[2])));
    }
    return vol / 6.0;
}

double total_area(const TriMesh& mesh) {
    double area = 0.0;
    for (FaceId f = 0; f < mesh.face_count(); ++f) area += mesh.face_area(f);
    return area;
}

bool is_convex(const TriMesh& mesh, double eps_rel) {
    double eps = eps_rel * mesh.bbox_diagonal();
    for (FaceId f = 0; f < mesh.face_count(); ++f) {
        Vec3 n = mesh.face_normal(f);
        const Vec3& p0 = mesh.position(mesh.triangle(f)[0]);
        for (VertexId v = 0; v < mesh.vertex_count(); ++v)
            if (dot(mesh.position(v) - p0, n) > eps) return false;
    }
    return true;
}

namespace {

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    // Ericson, Real-Time Collision Detection, closest point on triangle.
    Vec3 ab = b - a, ac = c - a, ap = p - a;
    double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0 && d2 <= 0) return norm(p - a);
    Vec3 bp = p - b;
    double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0 && d4 <= d3) return norm(p - b);
    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) {
        double t = d1 / (d1 - d3);
        return norm(p - (a + ab * t));
    }
    Vec3 cp = p - c;
    double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0 && d5 <= d6) return norm(p - c);
    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) {
        double t = d2 / (d2 - d6);
        return norm(p - (a + ac * t));
    }
    double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
        double t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return norm(p - (b + (c - b) * t));
    }
    double denom = 1.0 / (va + vb + vc);
    double v = vb * denom, w = vc * denom;
    return norm(p - (a + ab * v + ac * w));
}

// splitmix64: cheap block-seed decorrelation for the sample blocks
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct SplitMixRng {
    std::uint64_t state;
    explicit SplitMixRng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() { return splitmix64(state++); }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace

SteinerEvaluation steiner_polynomial(const TriMesh& mesh, double t, std::uint64_t samples,
                                     std::uint64_t seed) {
    if (!(t > 0.0)) throw RelationError("offset t must be positive");
    MeshTopology topo = compute_topology(mesh);
    if (!topo.is_closed) throw RelationError("Steiner polynomial needs a closed mesh");
    if (!is_convex(mesh)) throw RelationError("Steiner polynomial needs a convex mesh");

    SteinerEvaluation ev;
    ev.t = t;
    ev.seed = seed;
    ev.samples = samples;
    ev.volume = enclosed_volume(mesh);
    ev.area = total_area(mesh);
    for (EdgeId e = 0; e < mesh.edge_count(); ++e) {
        EdgeCurvature ec = edge_mean_curvature(mesh, e);
        if (ec.convexity < 0) throw RelationError("Steiner polynomial needs a convex mesh (concave edge)");
        ev.edge_term += ec.steiner;
    }
    ev.poly_volume = ev.volume + t * ev.area + 0.5 * t * t * ev.edge_term +
                     (t * t * t / 3.0) * 4.0 * kPi;

    // Monte Carlo: uniform points in the bounding box of the t-neighborhood,
    // counted when inside the solid or within t of the surface. Convexity
    // makes the inside test a plane check.
    auto [lo, hi] = mesh.bounding_box();
    lo -= Vec3{t, t, t};
    hi += Vec3{t, t, t};
    Vec3 extent = hi - lo;
    double box_volume = extent.x * extent.y * extent.z;

    struct Plane {
        Vec3 n;
        double d;
    };
    std::vector<Plane> planes(mesh.face_count());
    for (FaceId f = 0; f < mesh.face_count(); ++f) {
        Vec3 n = mesh.face_normal(f);
        planes[f] = {n, dot(n, mesh.position(mesh.triangle(f)[0]))};
    }

    const std::uint64_t block_size = 65536;
    const std::uint64_t blocks = (samples + block_size - 1) / block_size;
    std::vector<std::uint64_t> hits(blocks, 0);

    parallel_for(blocks, [&](std::size_t blk) {
        SplitMixRng rng(splitmix64(seed) ^ splitmix64(blk + 1));
        std::uint64_t n_here =
            std::min<std::uint64_t>(block_size, samples - blk * block_size);
        std::uint64_t count = 0;
        const double t2 = t * t;
        for (std::uint64_t s = 0; s < n_here; ++s) {
            Vec3 p{lo.x + extent.x * rng.uniform(), lo.y + extent.y * rng.uniform(),
                   lo.z + extent.z * rng.uniform()};
            bool inside = true;
            for (const Plane& pl : planes)
                if (dot(pl.n, p) > pl.d) { inside = false; break; }
            if (inside) {
                ++count;
                continue;
            }
            for (FaceId f = 0; f < mesh.face_count(); ++f) {
                const auto& tr = mesh.triangle(f);
                double d = point_triangle_distance(p, mesh.position(tr[0]), mesh.position(tr[1]),
                                                   mesh.position(tr[2]));
                if (d * d <= t2) { ++count; break; }
            }
        }
        hits[blk] = count;
    });

    std::uint64_t total_hits = 0;
    for (std::uint64_t h : hits) total_hits += h;  // fixed reduction order
    double p_hat = static_cast<double>(total_hits) / static_cast<double>(samples);
    ev.mc_volume = p_hat * box_volume;
    ev.mc_stderr = box_volume * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(samples));
    ev.pass = std::abs(ev.poly_volume - ev.mc_volume) <= 4.0 * ev.mc_stderr;
    return ev;
}

}  // namespace polycurv
