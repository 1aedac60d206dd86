#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "polycurv/mesh.hpp"
#include "polycurv/shapes.hpp"

// End-to-end checks of the installed command-line surface: exit codes,
// machine-readable output, determinism.

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace polycurv;

namespace {

const std::string cli = POLYCURV_CLI_PATH;

struct Sandbox {
    fs::path dir;
    Sandbox() {
        dir = fs::temp_directory_path() / ("polycurv_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args, const std::string& stdout_file) {
    std::string cmd = cli + " " + args + " > " + stdout_file + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string data_path(const char* name) {
    return std::string(POLYCURV_TEST_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("report on the cube: eight corners of defect pi/2") {
    Sandbox box;
    std::string out = box.path("cube.json");
    REQUIRE(run("report " + data_path("cube.off") + " --format json", out) == 0);
    json doc = json::parse(slurp(out));
    CHECK(doc["summary"]["euler_characteristic"] == 2);
    CHECK(doc["summary"]["genus"] == 0);
    REQUIRE(doc["vertices"].size() == 8);
    for (const auto& row : doc["vertices"])
        CHECK(std::abs(row["gauss"].get<double>() - kPi / 2) < 1e-12);
    CHECK(doc["convention"].get<std::string>().find("outward") != std::string::npos);
}

TEST_CASE("report on a flat grid: zero curvature everywhere") {
    Sandbox box;
    std::string mesh_path = box.path("grid.off");
    save_off(shapes::planar_grid(3), mesh_path);
    std::string out = box.path("grid.json");
    REQUIRE(run("report " + mesh_path, out) == 0);
    json doc = json::parse(slurp(out));
    for (const auto& row : doc["vertices"]) {
        if (!row["gauss"].is_null()) CHECK(std::abs(row["gauss"].get<double>()) < 1e-12);
        CHECK(row["mean_curvature_norm"].get<double>() < 1e-12);
    }
}

TEST_CASE("csv report of the icosahedron sums to 4 pi") {
    Sandbox box;
    std::string mesh_path = box.path("ico.off");
    save_off(shapes::icosahedron(), mesh_path);
    std::string out = box.path("ico.csv");
    REQUIRE(run("report " + mesh_path + " --format csv", out) == 0);

    std::ifstream in(out);
    std::string line;
    double total = 0.0;
    int rows = 0;
    bool in_vertex_table = false;
    while (std::getline(in, line)) {
        if (line.rfind("vertex,", 0) == 0) { in_vertex_table = true; continue; }
        if (line.rfind("edge,", 0) == 0) break;
        if (!in_vertex_table || line.empty() || line[0] == '#') continue;
        // columns: vertex,boundary,gauss,...
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        std::getline(ss, cell, ',');
        std::getline(ss, cell, ',');
        total += std::stod(cell);
        ++rows;
    }
    CHECK(rows == 12);
    CHECK(std::abs(total - 4 * kPi) < 1e-8);
}

TEST_CASE("verify: every check passes on an icosphere") {
    Sandbox box;
    std::string mesh_path = box.path("icosphere.off");
    save_off(shapes::icosphere(1), mesh_path);
    std::string out = box.path("verify.jsonl");
    REQUIRE(run("verify " + mesh_path, out) == 0);

    std::ifstream in(out);
    std::string line;
    std::getline(in, line);  // config echo
    CHECK(json::parse(line)["command"] == "verify");
    int rows = 0;
    while (std::getline(in, line)) {
        json row = json::parse(line);
        REQUIRE(row.contains("pass"));
        CHECK(row["pass"].get<bool>());
        ++rows;
    }
    CHECK(rows > 100);
}

TEST_CASE("verify: boundary stars are skipped for the force balance") {
    Sandbox box;
    std::string mesh_path = box.path("disk.off");
    save_off(shapes::disk(6, 2), mesh_path);
    std::string out = box.path("verify.jsonl");
    run("verify " + mesh_path + " --check force-balance", out);

    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    int skipped = 0, checked = 0;
    while (std::getline(in, line)) {
        json row = json::parse(line);
        if (row.contains("skipped")) {
            CHECK(row["skipped"] == "boundary");
            ++skipped;
        } else {
            CHECK(row["pass"].get<bool>());
            ++checked;
        }
    }
    CHECK(skipped == 6);  // the outer ring
    CHECK(checked == 7);  // center plus inner ring
}

TEST_CASE("verify: unknown check name is a usage error") {
    Sandbox box;
    CHECK(run("verify " + data_path("cube.off") + " --check gauss-bonnet,frobnicate",
              box.path("out")) == 2);
}

TEST_CASE("missing input file fails with exit 1") {
    Sandbox box;
    CHECK(run("report " + box.path("nope.off"), box.path("out")) == 1);
}

TEST_CASE("steiner on the cube passes and is reproducible byte for byte") {
    Sandbox box;
    std::string a = box.path("a.json"), b = box.path("b.json");
    REQUIRE(run("steiner " + data_path("cube.off") + " --t 0.5 --samples 200000 --seed 7", a) == 0);
    REQUIRE(run("steiner " + data_path("cube.off") + " --t 0.5 --samples 200000 --seed 7", b) == 0);
    CHECK(slurp(a) == slurp(b));
    json doc = json::parse(slurp(a));
    CHECK(doc["pass"].get<bool>());
    CHECK(doc["config"]["seed"] == 7);
    double expected = 4.0 + 0.75 * kPi + kPi / 6.0;
    CHECK(std::abs(doc["poly_volume"].get<double>() - expected) < 1e-12);
}

TEST_CASE("steiner rejects non-convex input with exit 1") {
    Sandbox box;
    std::string mesh_path = box.path("torus.off");
    save_off(shapes::torus(8, 3), mesh_path);
    CHECK(run("steiner " + mesh_path + " --t 0.1 --samples 1000 --seed 1", box.path("out")) == 1);
}

TEST_CASE("flow flattens a perturbed disk and writes the trace") {
    Sandbox box;
    // perturb the interior of a disk out of plane
    TriMesh disk = shapes::disk(8, 3);
    std::vector<Vec3> pts(disk.positions().begin(), disk.positions().end());
    for (VertexId v = 0; v < disk.vertex_count(); ++v)
        if (!disk.vertex_is_boundary(v)) pts[v].z += 0.02 * ((v * 2654435761u % 100) / 100.0 - 0.5);
    save_off(TriMesh(pts, {disk.triangles().begin(), disk.triangles().end()}),
             box.path("bumpy.off"));

    std::string out = box.path("flow.json");
    std::string trace = box.path("trace.csv");
    REQUIRE(run("flow " + box.path("bumpy.off") +
                    " --fix-boundary --steps 1000 --step-size 0.1 --tol 1e-8 --trace " + trace,
                out) == 0);
    json doc = json::parse(slurp(out));
    CHECK(doc["status"] == "converged");
    CHECK(doc["max_residual"].get<double>() < 1e-8);

    std::ifstream tr(trace);
    std::string header;
    std::getline(tr, header);
    CHECK(header == "iter,area,volume,max_Hp,step_size");
    int rows = 0;
    for (std::string line; std::getline(tr, line);) ++rows;
    CHECK(rows == doc["iterations"].get<int>() + 1);
}

TEST_CASE("curve command reports turning and writhe") {
    Sandbox box;
    std::string out = box.path("square.json");
    REQUIRE(run("curve " + data_path("square_curve.txt") + " --closed --writhe", out) == 0);
    json doc = json::parse(slurp(out));
    CHECK(std::abs(doc["turning"]["total"].get<double>() - 2 * kPi) < 1e-12);
    CHECK(std::abs(doc["writhe"]["angle_mod_2pi"].get<double>()) < 1e-10);
    CHECK(std::abs(doc["writhe"]["real_radians"].get<double>()) < 1e-12);

    // open polyline without --closed: writhe must be refused
    std::ofstream(box.path("line.txt")) << "0 0 0\n1 0 0\n2 1 0\n";
    CHECK(run("curve " + box.path("line.txt") + " --writhe", box.path("out")) == 1);
    CHECK(run("curve " + box.path("line.txt"), box.path("out")) == 0);
}

TEST_CASE("report output is deterministic") {
    Sandbox box;
    std::string mesh_path = box.path("g2.off");
    save_off(shapes::genus2(), mesh_path);
    std::string a = box.path("a.json"), b = box.path("b.json");
    REQUIRE(run("report " + mesh_path, a) == 0);
    REQUIRE(run("report " + mesh_path, b) == 0);
    CHECK(slurp(a) == slurp(b));
    // and with a thread cap in the environment
    std::string c = box.path("c.json");
    REQUIRE(std::system(("POLYCURV_THREADS=1 " + cli + " report " + mesh_path + " > " + c).c_str()) == 0);
    CHECK(slurp(a) == slurp(c));
}
