#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "carnot/classify.hpp"
#include "carnot/cone.hpp"
#include "carnot/group.hpp"
#include "carnot/monotone.hpp"
#include "carnot/multiexp.hpp"

namespace carnot::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Group spec document {"m": int, "ell": int, "A": [[[row], ...], ...]},
/// matrices row-major. Skewness is enforced to 1e-12; structural errors name
/// the offending matrix.
GroupSpec group_from_json(const Json& doc, const std::string& name = "file");
Json group_to_json(const GroupSpec& g);
GroupSpec load_group_file(const std::string& path);
void save_group_file(const GroupSpec& g, const std::string& path);

/// heisenbergN, hxr, freeN, abelianMxL.
bool is_builtin_group(const std::string& name);
GroupSpec builtin_group(const std::string& name);
/// Builtin name, otherwise a spec-file path.
GroupSpec resolve_group(const std::string& source);

Json vector_json(const Vector& v);
Json point_json(const Point& p);

Json to_json(const MultiExpSolution& s);
Json to_json(const OpennessReport& r);
Json to_json(const ConeCertificate& c);
Json to_json(const ConvexityReport& r);
Json to_json(const MonotonicityReport& r);
Json to_json(const ClassificationResult& r);

/// CSV with header r,target_norm,solution_size,residual.
void write_openness_csv(std::ostream& os, const OpennessReport& r);
/// CSV rows (z_1..z_m, t_1..t_ell, verdict).
void write_points_csv(std::ostream& os, const GroupSpec& g, const std::vector<Point>& pts,
                      const std::vector<std::string>& verdicts);
/// CSV: header case,n_x,n_y,n_u,n_t,offset,residual,global_residual,samples and one row.
void write_classification_csv(std::ostream& os, const ClassificationResult& r);

/// Shortest round-trip decimal form, as used in every report.
std::string format_double(double x);

}  // namespace carnot::io
