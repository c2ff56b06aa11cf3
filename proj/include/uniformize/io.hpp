#pragma once

#include "uniformize/penner.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace uniformize {

/// Text surface description.  Grammar (one record per line, '#' starts a comment):
///
///     format-version 1
///     triangles <T>
///     gluing <t1> <s1> <t2> <s2> [same]      (one per edge; edge id = line order)
///     lambda <x_0> ... <x_{E-1}>             (or: lengths <l_0> ...)
///     theta <theta_0> ... <theta_{V-1}>      (optional)
///     labels <name_0> ... <name_{V-1}>       (optional)
///
/// "same" marks an orientation-preserving gluing, which is rejected on build.
/// Vertex ids are assigned in order of first corner (triangle 0 corner 0 first).
struct SurfaceFile {
    enum class Values { Lambda, Lengths };

    int format_version = 1;
    int num_triangles = 0;
    std::vector<Gluing> gluings;
    Values kind = Values::Lambda;
    std::vector<double> values;
    std::optional<std::vector<double>> theta;
    std::optional<std::vector<std::string>> labels;
};

SurfaceFile parse_surface(std::istream& in);
SurfaceFile read_surface_file(const std::string& path);
std::string format_surface(const SurfaceFile& f);
void write_surface_file(const std::string& path, const SurfaceFile& f);

/// Builds and validates the triangulation; lengths become lambda = 2 log l.
DecoratedMetric to_metric(const SurfaceFile& f);
/// Emits M.  Vertex ids of the emitted file follow its own first-corner order;
/// when that differs from the ids in M, the old ids are written as labels and
/// theta is reordered to match.
SurfaceFile from_metric(const DecoratedMetric& M, const std::optional<std::vector<double>>& theta = std::nullopt);

struct ObjSurface {
    DecoratedMetric metric;
    std::vector<Eigen::Vector3d> positions; // vertex id = OBJ vertex order
    int genus = 0;
};

/// Closed oriented triangle mesh from OBJ ('v' and 'f' records, 1-based or
/// negative indices, "a/b/c" references allowed).
ObjSurface ingest_obj(std::istream& in);
ObjSurface ingest_obj_file(const std::string& path);

void write_obj(std::ostream& out, const std::vector<Eigen::Vector3d>& points,
               const std::vector<std::vector<int>>& faces);

/// Solver report, stored as JSON.
struct ReportFile {
    std::string command;
    std::string status;
    std::string kind;
    int iterations = 0;
    long flips_total = 0;
    std::vector<double> u;
    std::vector<int> active_set;
    std::vector<double> lower_bounds;
    std::vector<double> theta_tilde;
    double energy = 0;
    double kkt_residual = 0;
    double timing_seconds = 0;
    std::map<std::string, double> diagnostics;

    bool operator==(const ReportFile&) const = default;
};

std::string report_to_json(const ReportFile& r);
ReportFile report_from_json(const std::string& text);

/// %.17g
std::string format_real(double x);

} // namespace uniformize
