#include <doctest.h>

#include "support/surfaces.hpp"
#include "uniformize/cli.hpp"
#include "uniformize/errors.hpp"
#include "uniformize/io.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

using namespace uniformize;
using namespace uniformize::testing;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InternalInconsistency;
}

const char* kTetraObj = R"(# regular tetrahedron
v 1 1 1
v 1 -1 -1
v -1 1 -1
v -1 -1 1
f 1 2 3
f 1 4 2
f 1 3 4
f 2 4 3
)";

std::string octahedron_obj()
{
    std::ostringstream s;
    std::vector<std::vector<int>> faces;
    for (const auto& f : octahedron_faces())
        faces.push_back({f[0], f[1], f[2]});
    write_obj(s, octahedron_points(), faces);
    return s.str();
}

// Scratch directory removed at scope exit.
struct TempDir {
    fs::path path;
    TempDir()
    {
        std::random_device rd;
        path = fs::temp_directory_path() / ("uniformizer_test_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string write(const std::string& name, const std::string& text) const
    {
        const fs::path p = path / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "uniformizer");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("surface file round trip is idempotent")
{
    std::mt19937_64 rng(51);
    for (int genus : {0, 1, 2}) {
        const DecoratedMetric M = random_surface(genus, 7, rng, 1.5);
        const std::vector<double> theta = random_cone_angles(M.tri, rng);
        const std::string first = format_surface(from_metric(M, theta));
        std::istringstream in1(first);
        const SurfaceFile f1 = parse_surface(in1);
        const DecoratedMetric back = to_metric(f1);
        CHECK(back.lambda == M.lambda);
        const std::string second = format_surface(f1);
        CHECK(second == first);
        std::istringstream in2(second);
        CHECK(format_surface(parse_surface(in2)) == second);
    }
}

TEST_CASE("relabeled metrics are emitted with labels")
{
    // After a relabeling the first-corner order no longer matches the metric's
    // ids, so the emitted file records the old ids.
    std::mt19937_64 rng(52);
    const DecoratedMetric M = random_surface(0, 9, rng, 1.0);
    Triangulation T = M.tri;
    T.permute_vertices({8, 7, 6, 5, 4, 3, 2, 1, 0});
    const DecoratedMetric P = make_metric(T, M.lambda);
    std::vector<double> theta(9);
    for (int v = 0; v < 9; ++v)
        theta[v] = 1.0 + v;
    const SurfaceFile f = from_metric(P, theta);
    REQUIRE(f.labels);
    const DecoratedMetric back = to_metric(f);
    CHECK(isomorphic(back.tri, P.tri, false));
    for (int v = 0; v < 9; ++v)
        CHECK((*f.theta)[v] == theta[std::stoi((*f.labels)[v])]);
    std::istringstream in(format_surface(f));
    const SurfaceFile g = parse_surface(in);
    CHECK(g.labels == f.labels);
    CHECK(g.theta == f.theta);
}

TEST_CASE("lengths record becomes lambda = 2 log l")
{
    std::istringstream in("format-version 1\n"
                          "triangles 2\n"
                          "gluing 0 0 1 2\n"
                          "gluing 0 1 1 1\n"
                          "gluing 0 2 1 0\n"
                          "lengths 1 2 2.5\n");
    const DecoratedMetric M = to_metric(parse_surface(in));
    CHECK(M.tri.num_vertices() == 3);
    CHECK(M.lambda[0] == 0.0);
    CHECK(M.lambda[1] == doctest::Approx(2 * std::log(2.0)));
    CHECK(M.lambda[2] == doctest::Approx(2 * std::log(2.5)));
}

TEST_CASE("malformed surface files are rejected")
{
    auto parse = [](const std::string& s) {
        std::istringstream in(s);
        return to_metric(parse_surface(in));
    };
    const std::string head = "format-version 1\ntriangles 2\ngluing 0 0 1 2\ngluing 0 1 1 1\ngluing 0 2 1 0\n";
    CHECK(code_of([&] { parse(head); }) == ErrorCode::ParseError);
    CHECK(code_of([&] { parse(head + "lambda 0 0\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([&] { parse(head + "lambda 0 0 x\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([&] { parse(head + "lambda 0 0 0\nlengths 1 1 1\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([&] { parse(head + "lengths 1 0 1\n"); }) == ErrorCode::InvalidInput);
    CHECK(code_of([&] { parse(head + "lambda 0 0 0\ntheta 1 2\n"); }) == ErrorCode::InvalidInput);
    CHECK(code_of([&] { parse(head + "lambda 0 0 0\nbogus 1\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([&] {
              parse("format-version 1\ntriangles 2\ngluing 0 0 1 2\ngluing 0 1 1 1\nlambda 0 0\n");
          }) == ErrorCode::UnmatchedSide);
    CHECK(code_of([&] { parse("format-version 2\n"); }) == ErrorCode::ParseError);
}

TEST_CASE("OBJ ingestion")
{
    std::istringstream tet(kTetraObj);
    const ObjSurface S = ingest_obj(tet);
    CHECK(S.metric.tri.num_vertices() == 4);
    CHECK(S.metric.tri.num_edges() == 6);
    CHECK(S.genus == 0);
    for (double x : S.metric.lambda)
        CHECK(x == doctest::Approx(2 * std::log(std::sqrt(8.0))));

    std::istringstream oct(octahedron_obj());
    const ObjSurface O = ingest_obj(oct);
    CHECK(O.genus == 0);
    CHECK(O.metric.tri.num_vertices() == 6);
    CHECK(O.positions.size() == 6);

    // Slash references and negative indices.
    std::istringstream refs("v 1 1 1\nv 1 -1 -1\nv -1 1 -1\nv -1 -1 1\n"
                            "vn 0 0 1\n"
                            "f 1/1/1 2//1 3\nf 1 4 2\nf -4 -2 -1\nf 2 4 3\n");
    CHECK(ingest_obj(refs).metric.lambda == S.metric.lambda);
}

TEST_CASE("OBJ errors")
{
    auto ingest = [](const std::string& s) {
        std::istringstream in(s);
        return ingest_obj(in);
    };
    CHECK(code_of([&] { ingest("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n"); }) == ErrorCode::NonTriangleFace);
    CHECK(code_of([&] { ingest("v 1 1 1\nv 1 -1 -1\nv -1 1 -1\nv -1 -1 1\nf 1 2 3\nf 1 4 2\nf 1 3 4\n"); }) ==
          ErrorCode::OpenMesh);
    CHECK(code_of([&] { ingest("v 0 0 0\n"); }) == ErrorCode::OpenMesh);
    CHECK(code_of([&] { ingest("v 1 1 1\nv 1 1 1\nv -1 1 -1\nv -1 -1 1\nf 1 2 3\nf 1 4 2\nf 1 3 4\nf 2 4 3\n"); }) ==
          ErrorCode::ZeroLengthEdge);
    CHECK(code_of([&] { ingest("v 1 1\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([&] { ingest("v 1 1 1\nf 1 2 3\n"); }) == ErrorCode::ParseError);
}

TEST_CASE("OBJ output reads back")
{
    std::ostringstream s;
    const auto pts = octahedron_points();
    std::vector<std::vector<int>> faces;
    for (const auto& f : octahedron_faces())
        faces.push_back({f[0], f[1], f[2]});
    write_obj(s, pts, faces);
    std::istringstream in(s.str());
    const ObjSurface O = ingest_obj(in);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(O.positions[i] == pts[i]);
}

TEST_CASE("report file round trip")
{
    ReportFile r;
    r.command = "uniformize-sphere";
    r.status = "Converged";
    r.kind = "InscribedPolyhedron";
    r.iterations = 7;
    r.flips_total = 12;
    r.u = {0.1, -1.0 / 3.0, std::numbers::pi, 1e-300};
    r.active_set = {0, 3};
    r.lower_bounds = {0.1, -2.0, 0.0, 1e-300};
    r.theta_tilde = {2 * kPi, 0.7 * kPi};
    r.energy = -12.345678901234567;
    r.kkt_residual = 3.2e-13;
    r.timing_seconds = 0.25;
    r.diagnostics["sphere_residual"] = 1.1e-16;
    r.diagnostics["regularized"] = 0;
    const std::string text = report_to_json(r);
    CHECK(report_from_json(text) == r);
    CHECK(report_to_json(report_from_json(text)) == text);
    CHECK(code_of([] { report_from_json("{\"status\": 3"); }) == ErrorCode::ParseError);
}

TEST_CASE("defect formatting")
{
    CHECK(format_defect(0.0) == "0.000000e0");
    CHECK(format_defect(1e-14) == "0.000000e0");
    CHECK(format_defect(4 * kPi) == "1.256637e1");
    CHECK(format_defect(-2 * kPi) == "-6.283185e0");
    CHECK(format_defect(0.00125) == "1.250000e-3");
    CHECK(format_defect(9.9999999) == "1.000000e1");
}

TEST_CASE("check reports Gauss-Bonnet")
{
    TempDir dir;
    const std::string torus = dir.write("torus.surf", format_surface(from_metric(flat_torus())));
    const Run r = run({"check", torus});
    CHECK(r.code == ExitOk);
    CHECK(r.out.find("sum defect = 0.000000e0 (χ=0)") != std::string::npos);
    CHECK(r.out.find("delaunay ok") != std::string::npos);

    const std::string tet = dir.write("tetra.obj", kTetraObj);
    const Run t = run({"check", tet});
    CHECK(t.code == ExitOk);
    CHECK(t.out.find("sum defect = 1.256637e1 (χ=2)") != std::string::npos);
    CHECK(t.out.find("gauss-bonnet residual = 0.000000e0") != std::string::npos);
}

TEST_CASE("distance between a vertex and itself is a validation error")
{
    TempDir dir;
    const std::string s = dir.write("sphere3.surf", format_surface(from_metric(sphere3())));
    const Run r = run({"distance", s, "--from", "1", "--to", "1"});
    CHECK(r.code == ExitValidation);
    CHECK(r.err.find("SameVertex") != std::string::npos);
    const Run ok = run({"distance", s, "--from", "0", "--to", "1"});
    CHECK(ok.code == ExitOk);
    CHECK(run({"distance", s, "--from", "0", "--to", "7"}).code == ExitValidation);
}

TEST_CASE("uniformize-sphere on a tetrahedron")
{
    TempDir dir;
    const std::string tet = dir.write("tetra.obj", kTetraObj);
    const std::string out = dir.file("out.obj");
    const std::string rep = dir.file("report.json");
    const Run r = run({"uniformize-sphere", tet, "--vinf", "0", "-o", out, "--report", rep});
    CHECK(r.code == ExitOk);
    CHECK(r.err.find("InscribedPolyhedron") != std::string::npos);
    std::istringstream obj(slurp(out));
    const ObjSurface O = ingest_obj(obj);
    REQUIRE(O.positions.size() == 4);
    for (const auto& p : O.positions)
        CHECK(std::abs(p.norm() - 1) < 1e-9);
    const ReportFile rf = report_from_json(slurp(rep));
    CHECK(rf.status == "Converged");
    CHECK(rf.kind == "InscribedPolyhedron");
    CHECK(rf.u.size() == 3); // vinf carries no coordinate

    // Without -o the OBJ goes to stdout.
    const Run s = run({"uniformize-sphere", tet, "--vinf", "2"});
    CHECK(s.code == ExitOk);
    CHECK(s.out.find("\nf ") != std::string::npos);
}

TEST_CASE("runs are deterministic up to timing")
{
    TempDir dir;
    std::mt19937_64 rng(53);
    const std::string in = dir.write("s.surf", format_surface(from_metric(random_surface(0, 12, rng, 1.0))));
    ReportFile a, b;
    for (ReportFile* r : {&a, &b}) {
        const std::string rep = dir.file("r.json");
        const Run x = run({"uniformize-sphere", in, "--vinf", "3", "-o", dir.file("o.obj"), "--report", rep});
        REQUIRE(x.code == ExitOk);
        *r = report_from_json(slurp(rep));
        r->timing_seconds = 0;
    }
    CHECK(a == b);
}

TEST_CASE("exit codes")
{
    TempDir dir;
    const std::string torus = dir.write("torus.surf", format_surface(from_metric(flat_torus())));
    const std::string tet = dir.write("tetra.obj", kTetraObj);
    CHECK(run({}).code == ExitUsage);
    CHECK(run({"frobnicate"}).code == ExitUsage);
    CHECK(run({"check", torus, "--no-such-flag"}).code == ExitUsage);
    CHECK(run({"uniformize-sphere", tet}).code == ExitUsage);
    CHECK(run({"check", dir.file("missing.surf")}).code == ExitValidation);
    CHECK(run({"check", dir.write("bad.surf", "triangles two\n")}).code == ExitValidation);
    const Run g = run({"uniformize-sphere", torus, "--vinf", "0"});
    CHECK(g.code == ExitValidation);
    CHECK(g.err.find("WrongGenus") != std::string::npos);

    std::mt19937_64 rng(54);
    const std::string hard = dir.write("hard.surf", format_surface(from_metric(random_surface(0, 20, rng, 2.0))));
    const Run it = run({"uniformize-sphere", hard, "--vinf", "0", "--max-iter", "1"});
    CHECK(it.code == ExitSolver);
    CHECK(it.err.find("IterLimit") != std::string::npos);
    CHECK(run({"uniformize-sphere", tet, "--vinf", "0", "--tol", "-1"}).code == ExitValidation);
}

TEST_CASE("uniformize-torus prints the modulus and a flat surface")
{
    TempDir dir;
    const std::string in = dir.write("grid.surf", format_surface(from_metric(grid_torus(3, -0.3, 1.4))));
    const std::string flat = dir.file("flat.surf");
    const Run r = run({"uniformize-torus", in, "-o", flat});
    REQUIRE(r.code == ExitOk);
    std::istringstream lines(r.out);
    std::string key, eq;
    double re = 0, im = 0;
    lines >> key >> eq >> re >> im;
    CHECK(key == "tau");
    CHECK(std::abs(re + 0.3) < 1e-8);
    CHECK(std::abs(im - 1.4) < 1e-8);
    const Run c = run({"check", flat});
    CHECK(c.code == ExitOk);
    CHECK(c.out.find("delaunay ok") != std::string::npos);
}

TEST_CASE("prescribe-angles and energy")
{
    TempDir dir;
    std::mt19937_64 rng(55);
    const DecoratedMetric M = random_surface(1, 6, rng, 1.0);
    const std::string in = dir.write("t.surf", format_surface(from_metric(M)));
    const std::string out = dir.file("flat.surf");
    const Run r = run({"prescribe-angles", in, "--theta", "uniform", "-o", out});
    REQUIRE(r.code == ExitOk);
    const SurfaceFile f = read_surface_file(out);
    REQUIRE(f.theta);
    for (double t : *f.theta)
        CHECK(t == doctest::Approx(2 * kPi));

    // At the solution the E_Theta gradient vanishes.
    const std::string zeros = dir.write("u.txt", "0 0 0 0 0 0\n");
    const Run e = run({"energy", out, "--u", zeros});
    REQUIRE(e.code == ExitOk);
    std::istringstream lines(e.out.substr(e.out.find("gradient =") + 10));
    for (double g; lines >> g;)
        CHECK(std::abs(g) < 1e-8);

    const std::string bad = dir.write("theta.txt", "1 2 3\n");
    CHECK(run({"prescribe-angles", in, "--theta", bad}).code == ExitValidation);
}

TEST_CASE("delaunay subcommand emits a flip log and a Delaunay surface")
{
    TempDir dir;
    const std::string in = dir.write("skew.surf", format_surface(from_metric(flat_torus(2.3, 0.4))));
    const std::string out = dir.file("d.surf");
    const Run r = run({"delaunay", in, "-o", out});
    REQUIRE(r.code == ExitOk);
    const std::string text = slurp(out);
    CHECK(text.rfind("# ", 0) == 0);
    CHECK(text.find("# flip ") != std::string::npos);
    CHECK(run({"check", out}).out.find("delaunay ok") != std::string::npos);

    std::mt19937_64 rng(56);
    const std::string s = dir.write("s.surf", format_surface(from_metric(random_surface(0, 8, rng))));
    CHECK(run({"delaunay", s, "--adjusted", "--undecorated", "2,5", "-o", out}).code == ExitOk);
    CHECK(run({"delaunay", s, "--undecorated", "9"}).code == ExitValidation);
}

TEST_CASE("installed executable")
{
    TempDir dir;
    const std::string torus = dir.write("torus.surf", format_surface(from_metric(flat_torus())));
    const std::string s3 = dir.write("sphere3.surf", format_surface(from_metric(sphere3())));
    const std::string exe = UNIFORMIZER_EXE;
    auto status = [&](const std::string& args) {
        const int s = std::system((exe + " " + args + " >" + dir.file("stdout") + " 2>" + dir.file("stderr")).c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    CHECK(status("check " + torus) == 0);
    CHECK(slurp(dir.file("stdout")).find("sum defect = 0.000000e0 (χ=0)") != std::string::npos);
    CHECK(status("distance " + s3 + " --from 1 --to 1") == 2);
    CHECK(slurp(dir.file("stderr")).find("SameVertex") != std::string::npos);
    CHECK(status("--help") == 0);
    CHECK(status("") == 1);
}
