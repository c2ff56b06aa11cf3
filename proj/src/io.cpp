#include "uniformize/io.hpp"

#include "uniformize/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace uniformize {

namespace {

[[noreturn]] void parse_error(int line, const std::string& what)
{
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

double parse_real(const std::string& tok, int line)
{
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(tok, &used);
    } catch (const std::exception&) {
        parse_error(line, "expected a number, got '" + tok + "'");
    }
    if (used != tok.size())
        parse_error(line, "expected a number, got '" + tok + "'");
    return x;
}

int parse_int(const std::string& tok, int line)
{
    std::size_t used = 0;
    long x = 0;
    try {
        x = std::stol(tok, &used);
    } catch (const std::exception&) {
        parse_error(line, "expected an integer, got '" + tok + "'");
    }
    if (used != tok.size())
        parse_error(line, "expected an integer, got '" + tok + "'");
    return static_cast<int>(x);
}

std::ifstream open_or_throw(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::InvalidInput, "cannot open " + path);
    return in;
}

} // namespace

std::string format_real(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

SurfaceFile parse_surface(std::istream& in)
{
    SurfaceFile f;
    bool have_version = false, have_triangles = false, have_values = false;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;)
            tok.push_back(t);
        if (tok.empty())
            continue;
        const std::string& key = tok[0];
        if (key == "format-version") {
            if (tok.size() != 2 || have_version)
                parse_error(line, "format-version takes one value and appears once");
            f.format_version = parse_int(tok[1], line);
            if (f.format_version != 1)
                parse_error(line, "unsupported format version " + tok[1]);
            have_version = true;
        } else if (key == "triangles") {
            if (tok.size() != 2 || have_triangles)
                parse_error(line, "triangles takes one value and appears once");
            f.num_triangles = parse_int(tok[1], line);
            if (f.num_triangles <= 0)
                parse_error(line, "triangle count must be positive");
            have_triangles = true;
        } else if (key == "gluing") {
            if (tok.size() != 5 && !(tok.size() == 6 && tok[5] == "same"))
                parse_error(line, "gluing takes four integers and an optional 'same'");
            Gluing g;
            g.a = {parse_int(tok[1], line), parse_int(tok[2], line)};
            g.b = {parse_int(tok[3], line), parse_int(tok[4], line)};
            g.reversing = tok.size() == 5;
            f.gluings.push_back(g);
        } else if (key == "lambda" || key == "lengths") {
            if (have_values)
                parse_error(line, "exactly one of 'lambda' or 'lengths' is allowed");
            f.kind = key == "lambda" ? SurfaceFile::Values::Lambda : SurfaceFile::Values::Lengths;
            for (std::size_t i = 1; i < tok.size(); ++i)
                f.values.push_back(parse_real(tok[i], line));
            have_values = true;
        } else if (key == "theta") {
            if (f.theta)
                parse_error(line, "theta appears twice");
            f.theta.emplace();
            for (std::size_t i = 1; i < tok.size(); ++i)
                f.theta->push_back(parse_real(tok[i], line));
        } else if (key == "labels") {
            if (f.labels)
                parse_error(line, "labels appear twice");
            f.labels.emplace(tok.begin() + 1, tok.end());
        } else {
            parse_error(line, "unknown record '" + key + "'");
        }
    }
    if (!have_version)
        throw Error(ErrorCode::ParseError, "missing format-version");
    if (!have_triangles)
        throw Error(ErrorCode::ParseError, "missing triangles");
    if (!have_values)
        throw Error(ErrorCode::ParseError, "missing lambda or lengths");
    if (f.values.size() != f.gluings.size())
        throw Error(ErrorCode::ParseError, "need one lambda/length per gluing (" + std::to_string(f.gluings.size()) +
                                               "), got " + std::to_string(f.values.size()));
    return f;
}

SurfaceFile read_surface_file(const std::string& path)
{
    std::ifstream in = open_or_throw(path);
    return parse_surface(in);
}

std::string format_surface(const SurfaceFile& f)
{
    std::ostringstream os;
    os << "format-version " << f.format_version << '\n';
    os << "triangles " << f.num_triangles << '\n';
    for (const Gluing& g : f.gluings) {
        os << "gluing " << g.a.triangle << ' ' << g.a.side << ' ' << g.b.triangle << ' ' << g.b.side;
        if (!g.reversing)
            os << " same";
        os << '\n';
    }
    os << (f.kind == SurfaceFile::Values::Lambda ? "lambda" : "lengths");
    for (double x : f.values)
        os << ' ' << format_real(x);
    os << '\n';
    if (f.theta) {
        os << "theta";
        for (double x : *f.theta)
            os << ' ' << format_real(x);
        os << '\n';
    }
    if (f.labels) {
        os << "labels";
        for (const auto& s : *f.labels)
            os << ' ' << s;
        os << '\n';
    }
    return os.str();
}

void write_surface_file(const std::string& path, const SurfaceFile& f)
{
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::InvalidInput, "cannot write " + path);
    out << format_surface(f);
}

DecoratedMetric to_metric(const SurfaceFile& f)
{
    Triangulation T = Triangulation::build(f.num_triangles, f.gluings);
    std::vector<double> lambda = f.values;
    if (f.kind == SurfaceFile::Values::Lengths) {
        for (double& x : lambda) {
            if (!(x > 0) || !std::isfinite(x))
                throw Error(ErrorCode::InvalidInput, "edge lengths must be positive and finite");
            x = 2.0 * std::log(x);
        }
    }
    const int n = T.num_vertices();
    if (f.theta && static_cast<int>(f.theta->size()) != n)
        throw Error(ErrorCode::InvalidInput, "theta needs " + std::to_string(n) + " values");
    if (f.labels && static_cast<int>(f.labels->size()) != n)
        throw Error(ErrorCode::InvalidInput, "labels need " + std::to_string(n) + " values");
    return make_metric(std::move(T), std::move(lambda));
}

SurfaceFile from_metric(const DecoratedMetric& M, const std::optional<std::vector<double>>& theta)
{
    SurfaceFile f;
    f.num_triangles = M.tri.num_triangles();
    f.gluings = M.tri.gluings();
    f.kind = SurfaceFile::Values::Lambda;
    f.values = M.lambda;
    // After flips the file's first-corner numbering can differ from the ids in
    // M; reorder theta accordingly and keep the old ids as labels.
    const Triangulation rebuilt = Triangulation::build(f.num_triangles, f.gluings);
    const int n = M.tri.num_vertices();
    std::vector<int> old_of(n);
    bool identity = true;
    for (int h = 0; h < M.tri.num_halfedges(); ++h) {
        old_of[rebuilt.tail(h)] = M.tri.tail(h);
        identity &= rebuilt.tail(h) == M.tri.tail(h);
    }
    if (theta) {
        f.theta.emplace(n);
        for (int v = 0; v < n; ++v)
            (*f.theta)[v] = theta->at(old_of[v]);
    }
    if (!identity) {
        f.labels.emplace();
        for (int v = 0; v < n; ++v)
            f.labels->push_back(std::to_string(old_of[v]));
    }
    return f;
}

ObjSurface ingest_obj(std::istream& in)
{
    std::vector<Eigen::Vector3d> pos;
    std::vector<std::array<int, 3>> faces;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream ls(raw);
        std::string key;
        if (!(ls >> key))
            continue;
        if (key == "v") {
            std::string a, b, c;
            if (!(ls >> a >> b >> c))
                parse_error(line, "vertex needs three coordinates");
            pos.emplace_back(parse_real(a, line), parse_real(b, line), parse_real(c, line));
        } else if (key == "f") {
            std::vector<int> idx;
            for (std::string t; ls >> t;) {
                const int i = parse_int(t.substr(0, t.find('/')), line);
                const int n = static_cast<int>(pos.size());
                const int v = i < 0 ? n + i : i - 1;
                if (i == 0 || v < 0 || v >= n)
                    parse_error(line, "face index " + t + " out of range");
                idx.push_back(v);
            }
            if (idx.size() != 3)
                throw Error(ErrorCode::NonTriangleFace,
                            "line " + std::to_string(line) + ": face with " + std::to_string(idx.size()) + " vertices");
            faces.push_back({idx[0], idx[1], idx[2]});
        }
        // Other records (normals, texture coordinates, groups) are ignored.
    }
    if (faces.empty())
        throw Error(ErrorCode::OpenMesh, "no faces");
    Triangulation T = build_from_faces(static_cast<int>(pos.size()), faces);
    std::vector<double> lambda(T.num_edges());
    for (int e = 0; e < T.num_edges(); ++e) {
        const double l = (pos[T.v1(e)] - pos[T.v2(e)]).norm();
        if (!(l > 0))
            throw Error(ErrorCode::ZeroLengthEdge,
                        "edge " + std::to_string(T.v1(e)) + "-" + std::to_string(T.v2(e)) + " has zero length");
        lambda[e] = 2.0 * std::log(l);
    }
    ObjSurface out{make_metric(std::move(T), std::move(lambda)), std::move(pos), 0};
    out.genus = out.metric.tri.genus();
    return out;
}

ObjSurface ingest_obj_file(const std::string& path)
{
    std::ifstream in = open_or_throw(path);
    return ingest_obj(in);
}

void write_obj(std::ostream& out, const std::vector<Eigen::Vector3d>& points, const std::vector<std::vector<int>>& faces)
{
    for (const auto& p : points)
        out << "v " << format_real(p.x()) << ' ' << format_real(p.y()) << ' ' << format_real(p.z()) << '\n';
    for (const auto& f : faces) {
        out << 'f';
        for (int v : f)
            out << ' ' << v + 1;
        out << '\n';
    }
}

std::string report_to_json(const ReportFile& r)
{
    nlohmann::ordered_json j;
    j["command"] = r.command;
    j["status"] = r.status;
    j["kind"] = r.kind;
    j["iterations"] = r.iterations;
    j["flips_total"] = r.flips_total;
    j["u"] = r.u;
    j["active_set"] = r.active_set;
    j["lower_bounds"] = r.lower_bounds;
    j["theta_tilde"] = r.theta_tilde;
    j["energy"] = r.energy;
    j["kkt_residual"] = r.kkt_residual;
    j["timing_seconds"] = r.timing_seconds;
    j["diagnostics"] = r.diagnostics;
    return j.dump(2) + "\n";
}

ReportFile report_from_json(const std::string& text)
{
    ReportFile r;
    try {
        const auto j = nlohmann::json::parse(text);
        r.command = j.at("command").get<std::string>();
        r.status = j.at("status").get<std::string>();
        r.kind = j.at("kind").get<std::string>();
        r.iterations = j.at("iterations").get<int>();
        r.flips_total = j.at("flips_total").get<long>();
        r.u = j.at("u").get<std::vector<double>>();
        r.active_set = j.at("active_set").get<std::vector<int>>();
        r.lower_bounds = j.at("lower_bounds").get<std::vector<double>>();
        r.theta_tilde = j.at("theta_tilde").get<std::vector<double>>();
        r.energy = j.at("energy").get<double>();
        r.kkt_residual = j.at("kkt_residual").get<double>();
        r.timing_seconds = j.at("timing_seconds").get<double>();
        r.diagnostics = j.at("diagnostics").get<std::map<std::string, double>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
    }
    return r;
}

} // namespace uniformize
