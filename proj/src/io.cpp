#include "carnot/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>

#include "carnot/error.hpp"

namespace carnot::io {

namespace {

int read_count(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorCode::ParseError, std::string("group spec is missing \"") + key + "\"");
  const Json& v = doc.at(key);
  if (!v.is_number_integer()) throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" must be an integer");
  return v.get<int>();
}

Matrix read_matrix(const Json& a, int beta, int m) {
  const std::string label = "matrix A[" + std::to_string(beta) + "]";
  if (!a.is_array() || static_cast<int>(a.size()) != m) {
    throw Error(ErrorCode::ParseError, label + " must be an array of " + std::to_string(m) + " rows");
  }
  Matrix M(m, m);
  for (int i = 0; i < m; ++i) {
    const Json& row = a[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != m) {
      throw Error(ErrorCode::ParseError,
                  label + " row " + std::to_string(i) + " must have " + std::to_string(m) + " entries");
    }
    for (int j = 0; j < m; ++j) {
      const Json& x = row[static_cast<std::size_t>(j)];
      if (!x.is_number()) {
        throw Error(ErrorCode::ParseError,
                    label + " entry (" + std::to_string(i) + ", " + std::to_string(j) + ") is not a number");
      }
      M(i, j) = x.get<double>();
    }
  }
  return M;
}

}  // namespace

GroupSpec group_from_json(const Json& doc, const std::string& name) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "group spec must be a JSON object");
  for (const auto& item : doc.items()) {
    if (item.key() != "m" && item.key() != "ell" && item.key() != "A" && item.key() != "name") {
      throw Error(ErrorCode::ParseError, "unknown group spec key \"" + item.key() + "\"");
    }
  }
  const int m = read_count(doc, "m");
  const int ell = read_count(doc, "ell");
  if (m < 1 || ell < 0) throw Error(ErrorCode::ParseError, "group spec needs m >= 1 and ell >= 0");
  if (!doc.contains("A") || !doc.at("A").is_array()) throw Error(ErrorCode::ParseError, "\"A\" must be an array");
  const Json& A = doc.at("A");
  if (static_cast<int>(A.size()) != ell) {
    throw Error(ErrorCode::ParseError,
                "\"A\" has " + std::to_string(A.size()) + " matrices, expected ell = " + std::to_string(ell));
  }
  std::vector<Matrix> mats;
  for (int beta = 0; beta < ell; ++beta) mats.push_back(read_matrix(A[static_cast<std::size_t>(beta)], beta, m));
  std::string label = name;
  if (doc.contains("name") && doc.at("name").is_string()) label = doc.at("name").get<std::string>();
  return make_group(m, ell, std::move(mats), 1e-12, label);
}

Json group_to_json(const GroupSpec& g) {
  Json doc;
  doc["name"] = g.name();
  doc["m"] = g.m();
  doc["ell"] = g.ell();
  Json A = Json::array();
  for (int beta = 0; beta < g.ell(); ++beta) {
    Json mat = Json::array();
    for (int i = 0; i < g.m(); ++i) {
      Json row = Json::array();
      for (int j = 0; j < g.m(); ++j) row.push_back(g.A(beta)(i, j));
      mat.push_back(std::move(row));
    }
    A.push_back(std::move(mat));
  }
  doc["A"] = std::move(A);
  return doc;
}

GroupSpec load_group_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open group spec file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "group spec '" + path + "' is not valid JSON: " + e.what());
  }
  return group_from_json(doc, path);
}

void save_group_file(const GroupSpec& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
  out << group_to_json(g).dump(2) << '\n';
}

namespace {

const std::regex kHeis(R"(heisenberg([0-9]+))");
const std::regex kFree(R"(free([0-9]+))");
const std::regex kAbel(R"(abelian([0-9]+)x([0-9]+))");

}  // namespace

bool is_builtin_group(const std::string& name) {
  return name == "hxr" || std::regex_match(name, kHeis) || std::regex_match(name, kFree) ||
         std::regex_match(name, kAbel);
}

GroupSpec builtin_group(const std::string& name) {
  std::smatch mt;
  if (name == "hxr") return hr_product();
  if (std::regex_match(name, mt, kHeis)) return heisenberg(std::stoi(mt[1]));
  if (std::regex_match(name, mt, kFree)) return free_step2(std::stoi(mt[1]));
  if (std::regex_match(name, mt, kAbel)) return abelian(std::stoi(mt[1]), std::stoi(mt[2]));
  throw Error(ErrorCode::ParseError, "unknown builtin group '" + name + "'");
}

GroupSpec resolve_group(const std::string& source) {
  return is_builtin_group(source) ? builtin_group(source) : load_group_file(source);
}

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json point_json(const Point& p) { return Json{{"z", vector_json(p.z())}, {"t", vector_json(p.t())}}; }

Json to_json(const MultiExpSolution& s) {
  Json u = Json::array();
  for (const Vector& v : s.u) u.push_back(vector_json(v));
  return Json{{"p", s.p},
              {"u", std::move(u)},
              {"residual", s.residual},
              {"residual_z", s.residual_z},
              {"residual_t", s.residual_t},
              {"size", s.size},
              {"bound_ratio", s.bound_ratio}};
}

Json to_json(const OpennessReport& r) {
  Json rows = Json::array();
  for (const OpennessRow& row : r.rows) rows.push_back(Json{{"r", row.r}, {"worst_size", row.worst_size}, {"c0", row.c0}});
  return Json{{"c0", r.c0},
              {"vertical_exponent", r.vertical_exponent},
              {"horizontal_exponent", r.horizontal_exponent},
              {"rows", std::move(rows)},
              {"samples", r.samples.size()}};
}

Json to_json(const ConeCertificate& c) {
  Json doc{{"passed", c.passed()},
           {"epsilon", c.epsilon},
           {"s_max", c.s_max},
           {"samples", c.n_samples},
           {"violations", c.violations},
           {"attempts", c.attempts}};
  doc["witness"] = c.witness ? point_json(*c.witness) : Json(nullptr);
  return doc;
}

Json to_json(const ConvexityReport& r) {
  Json w = Json::array();
  for (const SegmentWitness& s : r.witnesses) {
    w.push_back(Json{{"p", point_json(s.p)}, {"q", point_json(s.q)}, {"s", s.s}, {"point", point_json(s.point)}});
  }
  return Json{{"pairs_tested", r.pairs_tested}, {"violations", r.violations}, {"witnesses", std::move(w)}};
}

Json to_json(const MonotonicityReport& r) {
  return Json{{"verdict", to_string(r.verdict)},
              {"pairs_tested", r.pairs_tested},
              {"set", to_json(r.set)},
              {"complement", to_json(r.complement)}};
}

Json to_json(const ClassificationResult& r) {
  Json doc{{"case", to_string(r.boundary_case)},
           {"coefficients", vector_json(r.coefficients)},
           {"normal", vector_json(r.normal)},
           {"offset", r.offset},
           {"residual", r.residual},
           {"global_residual", r.global_residual},
           {"verified", r.verified},
           {"samples", r.samples},
           {"boundary_point", point_json(r.boundary_point)}};
  doc["direction"] = r.direction ? vector_json(*r.direction) : Json(nullptr);
  return doc;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_openness_csv(std::ostream& os, const OpennessReport& r) {
  os << "r,target_norm,solution_size,residual\n";
  for (const OpennessSample& s : r.samples) {
    os << format_double(s.r) << ',' << format_double(s.target_norm) << ',' << format_double(s.solution_size) << ','
       << format_double(s.residual) << '\n';
  }
}

void write_points_csv(std::ostream& os, const GroupSpec& g, const std::vector<Point>& pts,
                      const std::vector<std::string>& verdicts) {
  if (verdicts.size() != pts.size()) throw Error(ErrorCode::DimensionMismatch, "one verdict per point required");
  for (int i = 0; i < g.m(); ++i) os << 'z' << i + 1 << ',';
  for (int i = 0; i < g.ell(); ++i) os << 't' << i + 1 << ',';
  os << "verdict\n";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Vector c = pts[k].coords();
    for (Eigen::Index i = 0; i < c.size(); ++i) os << format_double(c[i]) << ',';
    os << verdicts[k] << '\n';
  }
}

void write_classification_csv(std::ostream& os, const ClassificationResult& r) {
  os << "case,n_x,n_y,n_u,n_t,offset,residual,global_residual,samples\n";
  os << to_string(r.boundary_case);
  for (Eigen::Index i = 0; i < r.normal.size(); ++i) os << ',' << format_double(r.normal[i]);
  os << ',' << format_double(r.offset) << ',' << format_double(r.residual) << ','
     << format_double(r.global_residual) << ',' << r.samples << '\n';
}

}  // namespace carnot::io
