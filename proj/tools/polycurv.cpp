// polycurv: curvature reports, integral-relation verification, Steiner
// polynomial checks, area-minimizing flow, holonomy and curve tools for
// triangulated surfaces and polygonal curves.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "polycurv/connections.hpp"
#include "polycurv/curvature.hpp"
#include "polycurv/curve.hpp"
#include "polycurv/mesh.hpp"
#include "polycurv/relations.hpp"
#include "polycurv/variational.hpp"

using json = nlohmann::ordered_json;
using namespace polycurv;

namespace {

constexpr const char* kConventionBanner =
    "closed meshes carry outward unit normals; the mean-curvature vector of a "
    "convex mesh points inward and equals minus the area gradient";

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

struct Output {
    std::ostream* stream = &std::cout;
    std::ofstream file;
    void open(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw std::runtime_error("cannot open output file " + path);
        stream = &file;
    }
};

TriMesh load_with_format(const std::string& path, const std::string& format) {
    if (format == "off") return load_mesh(path, MeshFormat::Off);
    if (format == "obj") return load_mesh(path, MeshFormat::Obj);
    return load_mesh(path);
}

// ---------------------------------------------------------------- report

int cmd_report(const std::string& input, const std::string& format,
               const std::string& out_format, const std::string& out_path) {
    TriMesh mesh = load_with_format(input, format);
    MeshTopology topo = compute_topology(mesh);
    WillmoreEnergies willmore = willmore_energies(mesh);

    double total_gauss = 0.0, total_turn = 0.0;
    std::vector<VertexCurvature> rows(mesh.vertex_count());
    for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
        rows[v] = vertex_curvature(mesh, v);
        if (rows[v].gauss) total_gauss += *rows[v].gauss;
        if (rows[v].turn) total_turn += *rows[v].turn;
    }

    Output out;
    out.open(out_path);
    if (out_format == "json") {
        json doc;
        doc["config"] = {{"command", "report"}, {"input", input}, {"format", out_format}};
        doc["convention"] = kConventionBanner;
        doc["summary"] = {
            {"vertices", topo.vertex_count},
            {"edges", topo.edge_count},
            {"faces", topo.face_count},
            {"euler_characteristic", topo.euler_characteristic},
            {"boundary_loops", topo.boundary_loop_count},
            {"closed", topo.is_closed},
            {"total_gauss_curvature", total_gauss},
            {"total_boundary_turning", total_turn},
            {"total_area", total_area(mesh)},
            {"willmore_hp", willmore.hp_form},
            {"willmore_legacy", willmore.legacy_form},
            {"willmore_skipped_vertices", willmore.skipped_vertices},
        };
        if (topo.genus) doc["summary"]["genus"] = *topo.genus;
        if (topo.is_closed) doc["summary"]["enclosed_volume"] = enclosed_volume(mesh);

        doc["vertices"] = json::array();
        for (const VertexCurvature& row : rows) {
            json r = {{"vertex", row.vertex},
                      {"boundary", row.boundary},
                      {"combinatorial", row.combinatorial},
                      {"mean_curvature", vec_json(row.mean_curvature)},
                      {"mean_curvature_norm", norm(row.mean_curvature)},
                      {"force_balance_complete", row.force_balance_complete},
                      {"star_area", row.star_area}};
            r["gauss"] = row.gauss ? json(*row.gauss) : json(nullptr);
            r["boundary_turn"] = row.turn ? json(*row.turn) : json(nullptr);
            if (row.split) {
                r["k_plus"] = row.split->k_plus;
                r["k_minus"] = row.split->k_minus;
                r["hull_extreme"] = row.split->extreme;
            }
            r["area_vector"] = row.area_vector ? vec_json(*row.area_vector) : json(nullptr);
            r["density"] = row.density ? json(*row.density) : json(nullptr);
            doc["vertices"].push_back(std::move(r));
        }
        doc["edges"] = json::array();
        for (EdgeId e = 0; e < mesh.edge_count(); ++e) {
            json r = {{"edge", e}, {"length", mesh.edge_length(e)}};
            auto ends = mesh.edge_vertices(e);
            r["vertices"] = json::array({ends[0], ends[1]});
            if (mesh.edge_is_boundary(e)) {
                r["boundary"] = true;
            } else {
                EdgeCurvature ec = edge_mean_curvature(mesh, e);
                r["boundary"] = false;
                r["theta"] = ec.theta;
                r["convexity"] = ec.convexity;
                r["h_vec"] = vec_json(ec.h_vec);
                r["h_norm"] = norm(ec.h_vec);
                r["steiner"] = ec.steiner;
            }
            doc["edges"].push_back(std::move(r));
        }
        *out.stream << doc.dump(2) << "\n";
    } else {
        std::ostream& os = *out.stream;
        os << "# polycurv report: " << input << "\n";
        os << "# convention: " << kConventionBanner << "\n";
        os << "# V " << topo.vertex_count << " E " << topo.edge_count << " F " << topo.face_count
           << " chi " << topo.euler_characteristic << " closed " << (topo.is_closed ? 1 : 0)
           << "\n";
        os << "# total_gauss " << fmt17(total_gauss) << " total_boundary_turning "
           << fmt17(total_turn) << "\n";
        os << "# willmore_hp " << fmt17(willmore.hp_form) << " willmore_legacy "
           << fmt17(willmore.legacy_form) << "\n";
        os << "vertex,boundary,gauss,boundary_turn,combinatorial,k_plus,k_minus,hull_extreme,"
              "Hx,Hy,Hz,H_norm,Ax,Ay,Az,star_area,density\n";
        for (const VertexCurvature& row : rows) {
            os << row.vertex << "," << (row.boundary ? 1 : 0) << ","
               << (row.gauss ? fmt17(*row.gauss) : "") << ","
               << (row.turn ? fmt17(*row.turn) : "") << "," << fmt17(row.combinatorial) << ",";
            if (row.split)
                os << fmt17(row.split->k_plus) << "," << fmt17(row.split->k_minus) << ","
                   << (row.split->extreme ? 1 : 0) << ",";
            else
                os << ",,,";
            os << fmt17(row.mean_curvature.x) << "," << fmt17(row.mean_curvature.y) << ","
               << fmt17(row.mean_curvature.z) << "," << fmt17(norm(row.mean_curvature)) << ",";
            if (row.area_vector)
                os << fmt17(row.area_vector->x) << "," << fmt17(row.area_vector->y) << ","
                   << fmt17(row.area_vector->z) << ",";
            else
                os << ",,,";
            os << fmt17(row.star_area) << "," << (row.density ? fmt17(*row.density) : "") << "\n";
        }
        os << "edge,v0,v1,length,boundary,theta,convexity,h_norm,steiner\n";
        for (EdgeId e = 0; e < mesh.edge_count(); ++e) {
            auto ends = mesh.edge_vertices(e);
            os << e << "," << ends[0] << "," << ends[1] << "," << fmt17(mesh.edge_length(e)) << ",";
            if (mesh.edge_is_boundary(e)) {
                os << "1,,,,\n";
            } else {
                EdgeCurvature ec = edge_mean_curvature(mesh, e);
                os << "0," << fmt17(ec.theta) << "," << ec.convexity << ","
                   << fmt17(norm(ec.h_vec)) << "," << fmt17(ec.steiner) << "\n";
            }
        }
    }
    return 0;
}

// ---------------------------------------------------------------- verify

json relation_row(const RelationReport& r) {
    json row = {{"relation", r.relation}};
    row["lhs"] = r.lhs.size() == 1 ? json(r.lhs[0]) : json(r.lhs);
    row["rhs"] = r.rhs.size() == 1 ? json(r.rhs[0]) : json(r.rhs);
    row["residual"] = r.residual;
    row["tol"] = r.tolerance;
    row["pass"] = r.pass;
    return row;
}

int cmd_verify(const std::string& input, const std::string& format,
               std::vector<std::string> checks, const std::string& out_path) {
    const std::vector<std::string> known = {"gauss-bonnet", "force-balance", "torque",
                                            "position",     "vector-area",  "holonomy",
                                            "subdivision"};
    if (checks.empty()) checks = known;
    for (const std::string& c : checks)
        if (std::find(known.begin(), known.end(), c) == known.end())
            throw CLI::ValidationError("--check", "unknown check name: " + c);

    TriMesh mesh = load_with_format(input, format);
    MeshTopology topo = compute_topology(mesh);
    Output out;
    out.open(out_path);
    std::ostream& os = *out.stream;

    json config = {{"command", "verify"}, {"input", input}, {"checks", checks}};
    os << config.dump() << "\n";

    bool all_pass = true;
    auto emit = [&](json row) {
        if (row.contains("pass") && !row["pass"].get<bool>()) all_pass = false;
        os << row.dump() << "\n";
    };
    auto enabled = [&](const std::string& name) {
        return std::find(checks.begin(), checks.end(), name) != checks.end();
    };

    if (enabled("gauss-bonnet")) {
        if (topo.is_closed) {
            json row = relation_row(check_gauss_bonnet(mesh));
            row["scope"] = "whole-mesh";
            emit(std::move(row));
        } else if (topo.euler_characteristic == 1) {
            std::vector<FaceId> all(mesh.face_count());
            for (FaceId f = 0; f < mesh.face_count(); ++f) all[f] = f;
            json row = relation_row(check_gauss_bonnet_disk(mesh, make_patch(mesh, all)));
            row["scope"] = "whole-mesh";
            emit(std::move(row));
        } else {
            emit({{"relation", "gauss-bonnet"},
                  {"scope", "whole-mesh"},
                  {"skipped", "mesh is neither closed nor a disk"}});
        }
        for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
            if (mesh.vertex_is_isolated(v)) continue;
            json row = relation_row(check_gauss_bonnet_disk(mesh, star_patch(mesh, v)));
            row["vertex"] = v;
            emit(std::move(row));
        }
    }

    struct PatchCheck {
        const char* name;
        RelationReport (*fn)(const TriMesh&, const Patch&, double);
    };
    const PatchCheck patch_checks[] = {{"force-balance", check_force_balance},
                                       {"torque", check_torque_balance},
                                       {"position", check_position_relation},
                                       {"vector-area", check_vector_area}};
    for (const auto& pc : patch_checks) {
        if (!enabled(pc.name)) continue;
        for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
            if (mesh.vertex_is_isolated(v)) continue;
            if (mesh.vertex_is_boundary(v)) {
                emit({{"relation", pc.name}, {"vertex", v}, {"skipped", "boundary"}});
                continue;
            }
            json row = relation_row(pc.fn(mesh, star_patch(mesh, v), -1.0));
            row["vertex"] = v;
            emit(std::move(row));
        }
    }

    if (enabled("holonomy")) {
        LeviCivita lc = build_levi_civita(mesh);
        for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
            if (mesh.vertex_is_isolated(v)) continue;
            if (mesh.vertex_is_boundary(v)) {
                emit({{"relation", "holonomy"}, {"vertex", v}, {"skipped", "boundary"}});
                continue;
            }
            HolonomyResult h = vertex_holonomy(mesh, lc, v);
            double residual = std::abs(wrap_angle(h.angle - h.angle_defect));
            emit({{"relation", "holonomy"},
                  {"vertex", v},
                  {"lhs", h.angle},
                  {"rhs", h.angle_defect},
                  {"residual", residual},
                  {"tol", 1e-10},
                  {"pass", residual < 1e-10}});
        }
    }

    if (enabled("subdivision")) {
        double tol = 1e-12 * std::max(1.0, mesh.bbox_diagonal());
        for (EdgeId e = 0; e < mesh.edge_count(); ++e) {
            if (mesh.edge_is_boundary(e)) {
                emit({{"relation", "subdivision"}, {"edge", e}, {"skipped", "boundary"}});
                continue;
            }
            Vec3 h_e = edge_mean_curvature(mesh, e).h_vec;
            auto [split, q] = subdivide_edge(mesh, e, 0.5);
            Vec3 twice_new = vertex_mean_curvature(split, q) * 2.0;
            double residual = norm(twice_new - h_e);
            emit({{"relation", "subdivision"},
                  {"edge", e},
                  {"lhs", json::array({twice_new.x, twice_new.y, twice_new.z})},
                  {"rhs", json::array({h_e.x, h_e.y, h_e.z})},
                  {"residual", residual},
                  {"tol", tol},
                  {"pass", residual <= tol}});
        }
    }
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------- steiner

int cmd_steiner(const std::string& input, const std::string& format, double t,
                std::uint64_t samples, std::uint64_t seed, const std::string& out_path) {
    TriMesh mesh = load_with_format(input, format);
    SteinerEvaluation ev = steiner_polynomial(mesh, t, samples, seed);
    Output out;
    out.open(out_path);
    json doc = {
        {"config",
         {{"command", "steiner"}, {"input", input}, {"t", t}, {"samples", samples}, {"seed", seed}}},
        {"volume", ev.volume},
        {"area", ev.area},
        {"edge_term", ev.edge_term},
        {"gauss_term", 4.0 * kPi},
        {"poly_volume", ev.poly_volume},
        {"mc_volume", ev.mc_volume},
        {"mc_stderr", ev.mc_stderr},
        {"pass", ev.pass},
    };
    *out.stream << doc.dump(2) << "\n";
    return ev.pass ? 0 : 1;
}

// ---------------------------------------------------------------- flow

int cmd_flow(const std::string& input, const std::string& format, int steps, double step_size,
             bool fix_boundary, const std::vector<int>& fixed, const std::string& constraint,
             double tol, const std::string& trace_path, const std::string& out_path) {
    TriMesh mesh = load_with_format(input, format);
    FlowOptions opt;
    opt.fix_boundary = fix_boundary;
    opt.fixed.assign(fixed.begin(), fixed.end());
    opt.max_steps = steps;
    opt.step_size = step_size;
    opt.tolerance = tol;
    if (constraint == "volume")
        opt.constraint = FlowConstraint::Volume;
    else if (!constraint.empty() && constraint != "none")
        throw CLI::ValidationError("--constraint", "must be 'none' or 'volume'");

    FlowState state = minimize_area(mesh, opt);

    if (!trace_path.empty()) {
        std::ofstream trace(trace_path);
        if (!trace) throw std::runtime_error("cannot open trace file " + trace_path);
        trace << "iter,area,volume,max_Hp,step_size\n";
        for (const FlowTraceRow& row : state.trace)
            trace << row.iteration << "," << fmt17(row.area) << "," << fmt17(row.volume) << ","
                  << fmt17(row.max_h) << "," << fmt17(row.step_size) << "\n";
    }

    const char* status = state.status == FlowStatus::Converged      ? "converged"
                         : state.status == FlowStatus::MaxSteps     ? "max-steps"
                         : state.status == FlowStatus::DegenerateStep ? "degenerate-step"
                                                                      : "non-finite";
    Output out;
    out.open(out_path);
    json doc = {
        {"config",
         {{"command", "flow"},
          {"input", input},
          {"steps", steps},
          {"step_size", step_size},
          {"fix_boundary", fix_boundary},
          {"fixed", fixed},
          {"constraint", constraint.empty() ? "none" : constraint},
          {"tol", tol}}},
        {"status", status},
        {"iterations", state.iterations},
        {"final_area", total_area(state.mesh)},
        {"max_residual", state.max_residual},
    };
    if (opt.constraint == FlowConstraint::Volume) {
        doc["final_volume"] = enclosed_volume(state.mesh);
        doc["cmc_h"] = state.cmc_h;
    }
    if (!state.message.empty()) doc["message"] = state.message;
    *out.stream << doc.dump(2) << "\n";
    return (state.status == FlowStatus::Converged || state.status == FlowStatus::MaxSteps) ? 0 : 1;
}

// ---------------------------------------------------------------- holonomy

int cmd_holonomy(const std::string& input, const std::string& format,
                 const std::string& out_path) {
    TriMesh mesh = load_with_format(input, format);
    LeviCivita lc = build_levi_civita(mesh);
    Output out;
    out.open(out_path);
    std::ostream& os = *out.stream;
    os << json({{"command", "holonomy"}, {"input", input}}).dump() << "\n";
    for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
        if (mesh.vertex_is_isolated(v) || mesh.vertex_is_boundary(v)) continue;
        HolonomyResult h = vertex_holonomy(mesh, lc, v);
        json row = {{"vertex", v},
                    {"angle_mod_2pi", h.angle},
                    {"angle_defect", h.angle_defect},
                    {"residual", std::abs(wrap_angle(h.angle - h.angle_defect))}};
        os << row.dump() << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- curve

int cmd_curve(const std::string& input, bool closed, bool want_writhe, bool want_frames,
              std::vector<double> seed_normal, const std::string& out_path) {
    PolyCurve curve = load_curve(input, closed);
    Output out;
    out.open(out_path);

    json doc = {{"config",
                 {{"command", "curve"},
                  {"input", input},
                  {"closed", closed},
                  {"writhe", want_writhe},
                  {"frames", want_frames}}}};
    TurningData turning = turning_angles(curve);
    doc["points"] = curve.point_count();
    doc["turning"] = {{"total", turning.total_turning},
                      {"total_2sin", turning.total_2sin},
                      {"total_2tan", turning.total_2tan}};

    Vec3 seed{0, 0, 1};
    bool have_seed = false;
    if (!seed_normal.empty()) {
        if (seed_normal.size() != 3)
            throw CLI::ValidationError("--seed-normal", "needs exactly three components");
        seed = {seed_normal[0], seed_normal[1], seed_normal[2]};
        have_seed = true;
    }

    if (want_writhe) {
        if (!closed) throw std::runtime_error("writhe needs --closed");
        WritheResult w = writhe(curve);
        doc["writhe"] = {{"angle_mod_2pi", w.angle_mod_2pi},
                         {"real_radians", *w.real_radians},
                         {"real_turns", *w.real_radians / (2.0 * kPi)}};
    }
    if (want_frames || have_seed) {
        Vec3 t0 = normalized(curve.edge_vector(0));
        if (!have_seed && std::abs(dot(seed, t0)) > 1.0 - 1e-9) seed = {0, 1, 0};
        ParallelFrame frame = parallel_transport_frame(curve, seed);
        json frames = json::array();
        for (const auto& f : frame.frames)
            frames.push_back({{"t", vec_json(f.t)}, {"n1", vec_json(f.n1)}, {"n2", vec_json(f.n2)}});
        doc["frames"] = std::move(frames);
        if (frame.holonomy) doc["frame_holonomy"] = *frame.holonomy;
    }
    *out.stream << doc.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete curvature toolbox for triangle meshes and polygonal curves"};
    app.require_subcommand(1);

    std::string input, mesh_format, out_path, out_format = "json";

    auto add_mesh_opts = [&](CLI::App* cmd) {
        cmd->add_option("input", input, "mesh file (.off or .obj)")->required();
        cmd->add_option("--mesh-format", mesh_format, "override format detection: off|obj")
            ->check(CLI::IsMember({"off", "obj"}));
        cmd->add_option("--output", out_path, "write output here instead of stdout");
    };

    CLI::App* report = app.add_subcommand("report", "per-vertex and per-edge curvature tables");
    add_mesh_opts(report);
    report->add_option("--format", out_format, "output format")->check(CLI::IsMember({"json", "csv"}));

    CLI::App* verify = app.add_subcommand("verify", "check the integral curvature relations");
    add_mesh_opts(verify);
    std::vector<std::string> checks;
    verify->add_option("--check", checks,
                       "subset of gauss-bonnet,force-balance,torque,position,vector-area,"
                       "holonomy,subdivision")
        ->delimiter(',');

    CLI::App* steiner = app.add_subcommand("steiner", "offset-volume polynomial vs Monte Carlo");
    add_mesh_opts(steiner);
    double t = 0.5;
    std::uint64_t samples = 1000000, seed = 0;
    steiner->add_option("--t", t, "offset distance")->required();
    steiner->add_option("--samples", samples, "Monte-Carlo sample count");
    steiner->add_option("--seed", seed, "RNG seed (echoed in the output)");

    CLI::App* flow = app.add_subcommand("flow", "projected-gradient area minimization");
    add_mesh_opts(flow);
    int steps = 500;
    double step_size = 0.1, tol = 1e-8;
    bool fix_boundary = false;
    std::vector<int> fixed;
    std::string constraint = "none", trace_path;
    flow->add_option("--steps", steps, "maximum step count");
    flow->add_option("--step-size", step_size, "initial gradient step");
    flow->add_flag("--fix-boundary", fix_boundary, "pin every boundary vertex");
    flow->add_option("--fix", fixed, "comma-separated vertex ids to pin")->delimiter(',');
    flow->add_option("--constraint", constraint, "none|volume");
    flow->add_option("--tol", tol, "convergence tolerance on the residual");
    flow->add_option("--trace", trace_path, "write iter,area,volume,max_Hp,step_size CSV here");

    CLI::App* holonomy = app.add_subcommand("holonomy", "per-vertex tangent holonomy vs defect");
    add_mesh_opts(holonomy);

    CLI::App* curve = app.add_subcommand("curve", "turning angles, frames and writhe");
    curve->add_option("input", input, "curve file: one x y z per line")->required();
    curve->add_option("--output", out_path, "write output here instead of stdout");
    bool closed = false, want_writhe = false, want_frames = false;
    std::vector<double> seed_normal;
    curve->add_flag("--closed", closed, "treat the polyline as a closed loop");
    curve->add_flag("--writhe", want_writhe, "compute mod-2pi and real-valued writhe");
    curve->add_flag("--frames", want_frames, "emit the parallel frame per edge");
    curve->add_option("--seed-normal", seed_normal, "seed normal for the frame")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage error
    }

    try {
        if (report->parsed()) return cmd_report(input, mesh_format, out_format, out_path);
        if (verify->parsed()) return cmd_verify(input, mesh_format, checks, out_path);
        if (steiner->parsed()) return cmd_steiner(input, mesh_format, t, samples, seed, out_path);
        if (flow->parsed())
            return cmd_flow(input, mesh_format, steps, step_size, fix_boundary, fixed, constraint,
                            tol, trace_path, out_path);
        if (holonomy->parsed()) return cmd_holonomy(input, mesh_format, out_path);
        if (curve->parsed())
            return cmd_curve(input, closed, want_writhe, want_frames, seed_normal, out_path);
    } catch (const CLI::Error& e) {
        std::cerr << "polycurv: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "polycurv: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
