#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "polycurv/mesh.hpp"

namespace polycurv {

namespace {

// Strips comments ('#' to end of line) and returns the next non-empty line.
bool next_content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        bool blank = true;
        for (char ch : line)
            if (!std::isspace(static_cast<unsigned char>(ch))) { blank = false; break; }
        if (!blank) return true;
    }
    return false;
}

[[noreturn]] void parse_fail(const std::string& what) {
    throw MeshError("parse error: " + what);
}

}  // namespace

TriMesh read_off(std::istream& in) {
    std::string line;
    if (!next_content_line(in, line)) parse_fail("empty OFF stream");
    {
        std::istringstream ls(line);
        std::string magic;
        ls >> magic;
        if (magic != "OFF") parse_fail("missing OFF header");
        // Counts may share the header line or follow on the next one.
        long v = 0, f = 0, e = 0;
        if (ls >> v >> f >> e) {
            line = std::to_string(v) + " " + std::to_string(f) + " " + std::to_string(e);
        } else if (!next_content_line(in, line)) {
            parse_fail("missing OFF counts line");
        }
    }
    long nv = 0, nf = 0, ne = 0;
    {
        std::istringstream ls(line);
        if (!(ls >> nv >> nf >> ne)) parse_fail("bad OFF counts line");
        if (nv <= 0 || nf < 0) parse_fail("bad vertex/face counts");
    }

    std::vector<Vec3> positions;
    positions.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        if (!next_content_line(in, line)) parse_fail("truncated vertex list");
        std::istringstream ls(line);
        Vec3 p;
        if (!(ls >> p.x >> p.y >> p.z)) parse_fail("bad vertex line: " + line);
        positions.push_back(p);
    }

    std::vector<std::array<VertexId, 3>> tris;
    tris.reserve(nf);
    for (long i = 0; i < nf; ++i) {
        if (!next_content_line(in, line)) parse_fail("truncated face list");
        std::istringstream ls(line);
        int n = 0;
        if (!(ls >> n)) parse_fail("bad face line: " + line);
        if (n != 3) parse_fail("only triangles are supported, got a face with " + std::to_string(n) + " vertices");
        std::array<VertexId, 3> t{};
        if (!(ls >> t[0] >> t[1] >> t[2])) parse_fail("bad face line: " + line);
        tris.push_back(t);
    }
    return TriMesh(std::move(positions), std::move(tris));
}

TriMesh read_obj(std::istream& in) {
    // Only `v` and `f` records are consumed; normals, texture coordinates
    // and everything else are ignored. Face entries may carry i/j/k slash
    // suffixes; the leading (1-based) position index is used.
    std::vector<Vec3> positions;
    std::vector<std::array<VertexId, 3>> tris;
    std::string line;
    while (next_content_line(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x >> p.y >> p.z)) parse_fail("bad OBJ vertex line: " + line);
            positions.push_back(p);
        } else if (tag == "f") {
            std::vector<long> idx;
            std::string entry;
            while (ls >> entry) {
                std::size_t slash = entry.find('/');
                if (slash != std::string::npos) entry.erase(slash);
                long i = 0;
                try {
                    i = std::stol(entry);
                } catch (...) {
                    parse_fail("bad OBJ face entry: " + entry);
                }
                if (i < 0) parse_fail("negative OBJ indices are not supported");
                idx.push_back(i);
            }
            if (idx.size() != 3) parse_fail("only triangles are supported in OBJ faces");
            tris.push_back({static_cast<VertexId>(idx[0] - 1), static_cast<VertexId>(idx[1] - 1),
                            static_cast<VertexId>(idx[2] - 1)});
        }
    }
    if (positions.empty()) parse_fail("OBJ stream has no vertices");
    return TriMesh(std::move(positions), std::move(tris));
}

TriMesh load_mesh(const std::string& path, MeshFormat format) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open " + path);
    return format == MeshFormat::Off ? read_off(in) : read_obj(in);
}

TriMesh load_mesh(const std::string& path) {
    auto dot = path.rfind('.');
    std::string ext = (dot == std::string::npos) ? "" : path.substr(dot + 1);
    for (char& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (ext == "off") return load_mesh(path, MeshFormat::Off);
    if (ext == "obj") return load_mesh(path, MeshFormat::Obj);
    throw MeshError("cannot infer mesh format from path: " + path);
}

void write_off(const TriMesh& mesh, std::ostream& out) {
    out << "OFF\n" << mesh.vertex_count() << " " << mesh.face_count() << " " << mesh.edge_count() << "\n";
    char buf[96];
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const Vec3& p = mesh.position(v);
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.x, p.y, p.z);
        out << buf;
    }
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& t = mesh.triangle(f);
        out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    }
}

void save_off(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw MeshError("cannot open " + path + " for writing");
    write_off(mesh, out);
    if (!out) throw MeshError("write failed: " + path);
}

}  // namespace polycurv
