#include "uniformize/cli.hpp"

#include "uniformize/errors.hpp"
#include "uniformize/io.hpp"
#include "uniformize/realize.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace uniformize {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Loaded {
    DecoratedMetric metric;
    std::optional<std::vector<double>> theta;
};

bool ends_with(const std::string& s, const std::string& suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Loaded load(const std::string& path)
{
    if (ends_with(path, ".obj") || ends_with(path, ".OBJ"))
        return {ingest_obj_file(path).metric, std::nullopt};
    const SurfaceFile f = read_surface_file(path);
    return {to_metric(f), f.theta};
}

std::vector<double> read_numbers(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::InvalidInput, "cannot open " + path);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size())
                throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, path + ": not a number: " + tok);
        }
    }
    return out;
}

std::vector<int> parse_id_list(const std::string& s)
{
    std::vector<int> ids;
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ',');) {
        if (tok.empty())
            continue;
        try {
            ids.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidInput, "bad vertex id '" + tok + "'");
        }
    }
    return ids;
}

void check_vertex(const DecoratedMetric& M, int v)
{
    if (v < 0 || v >= M.tri.num_vertices())
        throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(v));
}

// Writes to the named file, or to `fallback` when the name is empty.
void emit(const std::string& path, const std::string& text, std::ostream& fallback)
{
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::InvalidInput, "cannot write " + path);
    out << text;
}

ReportFile report_of(const std::string& command, const SolveReport& rep, double seconds)
{
    ReportFile r;
    r.command = command;
    r.status = status_name(rep.status);
    r.iterations = rep.iterations;
    r.flips_total = rep.flips_total;
    r.u = rep.u;
    r.active_set = rep.active_set;
    r.lower_bounds = rep.lower_bounds;
    r.theta_tilde = rep.final_evaluation.theta_tilde;
    r.energy = rep.energy;
    r.kkt_residual = rep.kkt.max_residual();
    r.timing_seconds = seconds;
    r.diagnostics["regularized"] = rep.regularized ? 1.0 : 0.0;
    return r;
}

struct SolverFlags {
    double tol = SolveOptions{}.gradient_tolerance;
    int max_iter = SolveOptions{}.max_iterations;
    double delaunay_tol = DelaunayOptions{}.tolerance;
    bool parallel = false;

    void add_to(CLI::App* app)
    {
        app->add_option("--tol", tol, "Gradient tolerance (max norm)")->capture_default_str();
        app->add_option("--max-iter", max_iter, "Newton iteration limit")->capture_default_str();
        app->add_option("--delaunay-tol", delaunay_tol, "Relative tolerance of the Delaunay test")
            ->capture_default_str();
        app->add_flag("--parallel", parallel, "Use the OpenMP kernel for per-triangle terms");
    }
    SolveOptions options() const
    {
        SolveOptions o;
        o.gradient_tolerance = tol;
        o.max_iterations = max_iter;
        o.energy.delaunay.tolerance = delaunay_tol;
        o.energy.exec = parallel ? Exec::Parallel : Exec::Serial;
        return o;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

std::string format_defect(double x)
{
    if (!std::isfinite(x))
        return std::to_string(x);
    if (std::abs(x) < 1e-12)
        return "0.000000e0";
    int e = static_cast<int>(std::floor(std::log10(std::abs(x))));
    double m = x / std::pow(10.0, e);
    if (std::abs(std::round(m * 1e6) / 1e6) >= 10.0) {
        ++e;
        m /= 10.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6fe%d", m, e);
    return buf;
}

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Discrete conformal uniformization of triangulated surfaces"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "uniformizer 1.0");

    std::string input;
    auto add_input = [&](CLI::App* sub) { sub->add_option("input", input, "SurfaceFile or OBJ")->required(); };

    auto* check = app.add_subcommand("check", "Validate a surface, test the Delaunay condition, report Gauss-Bonnet");
    add_input(check);

    auto* delaunay = app.add_subcommand("delaunay", "Flip to the (adjusted) Delaunay triangulation");
    add_input(delaunay);
    bool adjusted = false;
    std::string undecorated, output;
    double dtol = DelaunayOptions{}.tolerance;
    delaunay->add_flag("--adjusted", adjusted, "Fan punctured faces from their undecorated vertex");
    delaunay->add_option("--undecorated", undecorated, "Comma-separated vertices without a horocycle");
    delaunay->add_option("--tol", dtol, "Relative Delaunay tolerance")->capture_default_str();
    delaunay->add_option("-o,--output", output, "SurfaceFile to write (default: stdout)");

    auto* distance = app.add_subcommand("distance", "Horocycle distance between two vertices");
    add_input(distance);
    int from = -1, to = -1;
    distance->add_option("--from", from, "First vertex")->required();
    distance->add_option("--to", to, "Second vertex")->required();

    SolverFlags sflags;
    std::string report_path;

    auto* sphere = app.add_subcommand("uniformize-sphere", "Inscribed ideal polyhedron for a genus-0 surface");
    add_input(sphere);
    int vinf = -1;
    std::string obj_path;
    sphere->add_option("--vinf", vinf, "Vertex sent to the north pole")->required();
    sphere->add_option("-o,--output", obj_path, "OBJ to write (default: stdout)");
    sphere->add_option("--report", report_path, "JSON report to write");
    sflags.add_to(sphere);

    auto* torus = app.add_subcommand("uniformize-torus", "Flat metric, lattice and modulus of a torus");
    add_input(torus);
    torus->add_option("-o,--output", output, "Flat SurfaceFile to write");
    torus->add_option("--report", report_path, "JSON report to write");
    sflags.add_to(torus);

    auto* angles = app.add_subcommand("prescribe-angles", "Conformally equivalent metric with given cone angles");
    add_input(angles);
    std::string theta_arg;
    angles->add_option("--theta", theta_arg, "File of per-vertex angles, or 'uniform' (default: from input)");
    angles->add_option("-o,--output", output, "SurfaceFile to write (default: stdout)");
    angles->add_option("--report", report_path, "JSON report to write");
    sflags.add_to(angles);

    auto* energy = app.add_subcommand("energy", "Evaluate an energy and its gradient");
    add_input(energy);
    std::string u_path;
    int energy_vinf = -1;
    energy->add_option("--u", u_path, "File of u values")->required();
    energy->add_option("--vinf", energy_vinf, "Evaluate the limit energy with this vertex undecorated");
    energy->add_option("--theta", theta_arg, "File of per-vertex angles, or 'uniform'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ExitOk : ExitUsage;
    }

    try {
        const auto t0 = std::chrono::steady_clock::now();
        if (*check) {
            const Loaded L = load(input);
            const DecoratedMetric& M = L.metric;
            const Triangulation& T = M.tri;
            T.validate();
            out << "vertices " << T.num_vertices() << " edges " << T.num_edges() << " triangles "
                << T.num_triangles() << " genus " << T.genus() << '\n';
            const DelaunayCheck dc = check_delaunay(M, PartialDecoration::finite(std::vector<double>(T.num_vertices())));
            out << "delaunay " << (dc.ok ? "ok" : "violated") << " (" << dc.violations.size() << " violating, "
                << dc.nonessential.size() << " nonessential)\n";
            if (dc.ok) {
                const CrossCheck cc = euclidean_delaunay_crosscheck(M);
                out << "euclidean crosscheck " << (cc.consistent ? "ok" : "mismatch") << '\n';
            }
            // Angle sums of the Delaunay triangulation, which always satisfies the
            // triangle inequalities.
            const int n = T.num_vertices();
            const ConeAngleTarget zero{std::vector<double>(n, 0.0)};
            const EnergyEvaluation ev = e_theta(M, zero, std::vector<double>(n, 0.0));
            double defect = 0.0;
            for (double th : ev.theta_tilde)
                defect += kTwoPi - th;
            const int chi = T.euler_characteristic();
            out << "sum defect = " << format_defect(defect) << " (χ=" << chi << ")\n";
            out << "gauss-bonnet residual = " << format_defect(defect - kTwoPi * chi) << '\n';
            if (L.theta)
                out << "theta gauss-bonnet residual = "
                    << format_defect(gauss_bonnet_residual(T, ConeAngleTarget{*L.theta})) << '\n';
            return ExitOk;
        }
        if (*delaunay) {
            const Loaded L = load(input);
            const int n = L.metric.tri.num_vertices();
            PartialDecoration u = PartialDecoration::finite(std::vector<double>(n, 0.0));
            for (int v : parse_id_list(undecorated)) {
                check_vertex(L.metric, v);
                u.missing[v] = 1;
            }
            DelaunayOptions opts;
            opts.tolerance = dtol;
            const DelaunayResult D =
                make_delaunay(L.metric, u, adjusted ? DelaunayMode::Adjusted : DelaunayMode::Plain, opts);
            std::ostringstream text;
            text << "# " << D.flips.size() << " flips\n";
            for (const FlipRecord& f : D.flips)
                text << "# flip " << f.edge << ' ' << format_real(f.lambda_before) << ' '
                     << format_real(f.lambda_after) << '\n';
            text << format_surface(from_metric(D.metric, L.theta));
            emit(output, text.str(), out);
            return ExitOk;
        }
        if (*distance) {
            const Loaded L = load(input);
            check_vertex(L.metric, from);
            check_vertex(L.metric, to);
            out << format_real(horocycle_distance(L.metric, from, to)) << '\n';
            return ExitOk;
        }
        if (*sphere) {
            const Loaded L = load(input);
            check_vertex(L.metric, vinf);
            const Realization R = uniformize_sphere(L.metric, vinf, sflags.options());
            std::ostringstream obj;
            obj << "# " << realization_kind_name(R.kind) << '\n';
            write_obj(obj, R.points, R.faces);
            emit(obj_path, obj.str(), out);
            ReportFile rf = report_of("uniformize-sphere", *R.solve, seconds_since(t0));
            rf.kind = realization_kind_name(R.kind);
            rf.diagnostics["sphere_residual"] = R.sphere_residual;
            rf.diagnostics["planarity"] = R.planarity;
            rf.diagnostics["convexity_margin"] = R.convexity_margin;
            if (!report_path.empty())
                emit(report_path, report_to_json(rf), out);
            err << realization_kind_name(R.kind) << ": " << R.solve->iterations << " iterations, "
                << R.solve->active_set.size() << " active bounds\n";
            return ExitOk;
        }
        if (*torus) {
            const Loaded L = load(input);
            const Realization R = uniformize_torus(L.metric, sflags.options());
            out << "tau = " << format_real(R.tau.real()) << ' ' << format_real(R.tau.imag()) << '\n';
            out << "omega1 = " << format_real(R.omega1.x()) << ' ' << format_real(R.omega1.y()) << '\n';
            out << "omega2 = " << format_real(R.omega2.x()) << ' ' << format_real(R.omega2.y()) << '\n';
            if (!output.empty())
                write_surface_file(output, from_metric(*R.metric));
            ReportFile rf = report_of("uniformize-torus", *R.solve, seconds_since(t0));
            rf.kind = realization_kind_name(R.kind);
            rf.diagnostics["tau_re"] = R.tau.real();
            rf.diagnostics["tau_im"] = R.tau.imag();
            rf.diagnostics["deck_residual"] = R.deck_residual;
            if (!report_path.empty())
                emit(report_path, report_to_json(rf), out);
            return ExitOk;
        }
        auto resolve_theta = [&](const Loaded& L, bool required) -> std::vector<double> {
            const Triangulation& T = L.metric.tri;
            const int n = T.num_vertices();
            if (theta_arg == "uniform" || (theta_arg.empty() && !L.theta && !required))
                return std::vector<double>(n, kTwoPi * (n - T.euler_characteristic()) / n);
            if (theta_arg.empty()) {
                if (!L.theta)
                    throw Error(ErrorCode::InvalidInput, "no cone angles: pass --theta or add a theta record");
                return *L.theta;
            }
            std::vector<double> th = read_numbers(theta_arg);
            if (static_cast<int>(th.size()) != n)
                throw Error(ErrorCode::InvalidInput, "theta file needs " + std::to_string(n) + " values");
            return th;
        };
        if (*angles) {
            const Loaded L = load(input);
            const ConeAngleTarget theta{resolve_theta(L, true)};
            const Realization R = prescribe_cone_angles(L.metric, theta, sflags.options());
            // The emitted file carries the achieved metric and the requested angles.
            emit(output, format_surface(from_metric(*R.metric, theta.theta)), out);
            ReportFile rf = report_of("prescribe-angles", *R.solve, seconds_since(t0));
            rf.kind = realization_kind_name(R.kind);
            if (!report_path.empty())
                emit(report_path, report_to_json(rf), out);
            return ExitOk;
        }
        if (*energy) {
            const Loaded L = load(input);
            const std::vector<double> u = read_numbers(u_path);
            EnergyEvaluation ev;
            if (energy_vinf >= 0) {
                check_vertex(L.metric, energy_vinf);
                ev = e_bar(L.metric, energy_vinf, u);
            } else {
                ev = e_theta(L.metric, ConeAngleTarget{resolve_theta(L, false)}, u);
            }
            out << "value = " << format_real(ev.value) << '\n';
            out << "gradient =";
            for (int i = 0; i < ev.gradient.size(); ++i)
                out << ' ' << format_real(ev.gradient[i]);
            out << '\n';
            out << "flips = " << ev.delaunay.flips.size() << '\n';
            return ExitOk;
        }
    } catch (const Error& e) {
        err << e.what() << '\n';
        return is_solver_failure(e.code()) ? ExitSolver : ExitValidation;
    } catch (const std::exception& e) {
        err << "InternalError: " << e.what() << '\n';
        return ExitSolver;
    }
    return ExitUsage;
}

} // namespace uniformize
