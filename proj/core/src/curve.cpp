#include "polycurv/curve.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace polycurv {

namespace {

void check_curve(const PolyCurve& curve) {
    int n = curve.point_count();
    if (n < 2) throw CurveError("curve needs at least two points");
    if (curve.closed && n < 3) throw CurveError("closed curve needs at least three points");
    for (int i = 0; i < curve.edge_count(); ++i)
        if (norm2(curve.edge_vector(i)) == 0.0)
            throw CurveError("zero-length edge at point " + std::to_string(i));
}

// Signed solid angle of the spherical triangle spanned by unit vectors.
double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    double num = dot(a, cross(b, c));
    double den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    return 2.0 * std::atan2(num, den);
}

// Closest-distance between segments [p0,p1] and [q0,q1].
double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
    Vec3 d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
    double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
    double c = dot(d1, r), b = dot(d1, d2);
    double denom = a * e - b * b;
    double s = 0.0, t = 0.0;
    if (denom > 0.0) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
    t = (b * s + f) / e;
    if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
    } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
    }
    return norm(p0 + d1 * s - (q0 + d2 * t));
}

}  // namespace

TurningData turning_angles(const PolyCurve& curve) {
    check_curve(curve);
    int n = curve.point_count();
    if (!curve.closed && n < 3) throw CurveError("need at least three points for turning angles");

    TurningData data;
    auto corner = [&](int i) {
        // angle between the edge into point i and the edge out of it
        Vec3 u = curve.edge_vector((i - 1 + n) % n);
        Vec3 v = curve.edge_vector(i);
        return angle_between(u, v);
    };
    int first = curve.closed ? 0 : 1;
    int last = curve.closed ? n : n - 1;
    for (int i = first; i < last; ++i) {
        double psi = corner(i);
        data.vertices.push_back(i);
        data.psi.push_back(psi);
        data.total_turning += psi;
        data.total_2sin += 2.0 * std::sin(0.5 * psi);
        data.total_2tan += 2.0 * std::tan(0.5 * psi);
    }
    return data;
}

ParallelFrame parallel_transport_frame(const PolyCurve& curve, const Vec3& seed_normal) {
    check_curve(curve);
    int m = curve.edge_count();

    Vec3 t0 = normalized(curve.edge_vector(0));
    Vec3 n1 = seed_normal - t0 * dot(seed_normal, t0);
    if (norm(n1) < 1e-12 * norm(seed_normal))
        throw CurveError("seed normal is parallel to the first edge");
    n1 = normalized(n1);

    ParallelFrame frame;
    frame.frames.push_back({t0, n1, cross(t0, n1)});

    Vec3 seed_n1 = n1;
    auto transport = [&](int corner_point, const Vec3& t_prev, const Vec3& t_next, Vec3& n) {
        double psi = angle_between(t_prev, t_next);
        if (psi < 1e-15) return;  // straight: nothing to do
        if (kPi - psi < 1e-12)
            throw CurveError("antiparallel edges at point " + std::to_string(corner_point) +
                             ": parallel transport undefined");
        Vec3 axis = normalized(cross(t_prev, t_next));
        n = Mat3::axis_angle(axis, psi) * n;
    };

    Vec3 t_prev = t0;
    for (int i = 1; i < m; ++i) {
        Vec3 t = normalized(curve.edge_vector(i));
        transport(i, t_prev, t, n1);
        // re-orthogonalize against drift; keeps the frame orthonormal to
        // rounding over long curves without adding twist
        n1 = normalized(n1 - t * dot(n1, t));
        frame.frames.push_back({t, n1, cross(t, n1)});
        t_prev = t;
    }

    if (curve.closed) {
        Vec3 n_final = n1;
        transport(0, t_prev, t0, n_final);
        n_final = normalized(n_final - t0 * dot(n_final, t0));
        frame.holonomy = std::atan2(dot(cross(seed_n1, n_final), t0), dot(seed_n1, n_final));
    }
    return frame;
}

double writhe_gauss_radians(const PolyCurve& curve) {
    check_curve(curve);
    if (!curve.closed) throw CurveError("writhe is defined for closed curves");
    if (curve_self_intersects(curve))
        throw CurveError("curve self-intersects: real-valued writhe undefined");

    int n = curve.edge_count();
    const auto& p = curve.points;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        Vec3 a0 = p[i], a1 = p[(i + 1) % n];
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // wrap-adjacent
            Vec3 b0 = p[j], b1 = p[(j + 1) % n];
            Vec3 u00 = normalized(b0 - a0);
            Vec3 u01 = normalized(b1 - a0);
            Vec3 u10 = normalized(b0 - a1);
            Vec3 u11 = normalized(b1 - a1);
            // Signed area of the spherical quadrilateral traced by the
            // direction map unit(b(t) - a(s)) over the parameter square.
            total += spherical_triangle_area(u00, u10, u11) +
                     spherical_triangle_area(u00, u11, u01);
        }
    }
    return total;
}

bool curve_self_intersects(const PolyCurve& curve, double eps_rel) {
    int n = curve.edge_count();
    const auto& p = curve.points;
    int np = curve.point_count();
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, norm(curve.edge_vector(i)));
    double eps = eps_rel * scale;
    for (int i = 0; i < n; ++i)
        for (int j = i + 2; j < n; ++j) {
            if (curve.closed && i == 0 && j == n - 1) continue;
            double d = segment_distance(p[i], p[(i + 1) % np], p[j], p[(j + 1) % np]);
            if (d < eps) return true;
        }
    return false;
}

WritheResult writhe(const PolyCurve& curve, bool want_real) {
    check_curve(curve);
    if (!curve.closed) throw CurveError("writhe is defined for closed curves");

    Vec3 t0 = normalized(curve.edge_vector(0));
    // any direction not parallel to the first edge works as a seed
    Vec3 seed = std::abs(t0.x) <= std::abs(t0.y) && std::abs(t0.x) <= std::abs(t0.z)
                    ? Vec3{1, 0, 0}
                    : (std::abs(t0.y) <= std::abs(t0.z) ? Vec3{0, 1, 0} : Vec3{0, 0, 1});

    WritheResult result;
    ParallelFrame frame = parallel_transport_frame(curve, seed);
    result.angle_mod_2pi = wrap_angle(*frame.holonomy);
    if (want_real) result.real_radians = writhe_gauss_radians(curve);
    return result;
}

PolyCurve read_curve(std::istream& in, bool closed) {
    PolyCurve curve;
    curve.closed = closed;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        Vec3 p;
        if (ls >> p.x >> p.y >> p.z) curve.points.push_back(p);
    }
    if (closed && curve.points.size() >= 2 && curve.points.front() == curve.points.back())
        throw CurveError("closed curves must not repeat the first point at the end");
    check_curve(curve);
    return curve;
}

PolyCurve load_curve(const std::string& path, bool closed) {
    std::ifstream in(path);
    if (!in) throw CurveError("cannot open " + path);
    return read_curve(in, closed);
}

}  // namespace polycurv
