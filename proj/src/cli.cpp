#include "carnot/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "carnot/classify.hpp"
#include "carnot/cone.hpp"
#include "carnot/error.hpp"
#include "carnot/io.hpp"
#include "carnot/monotone.hpp"
#include "carnot/multiexp.hpp"

namespace carnot::cli {

using io::Json;

namespace {

double parse_real(const std::string& tok, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || end != tok.c_str() + tok.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::ParseError, "cannot read '" + tok + "' as a number in " + what);
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t') {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

void require_hxr_dims(const GroupSpec& g, const std::string& kind) {
  if (g.m() != 3 || g.ell() != 1) throw Error(ErrorCode::InvalidArgument, kind + " oracles need an H x R group");
}

}  // namespace

Vector parse_vector(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() == 1 && parts[0].empty()) return Vector(0);
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_real(parts[i], "'" + text + "'");
  return v;
}

Point parse_point(const GroupSpec& g, const std::string& text) {
  const auto pos = text.find(';');
  const Vector z = parse_vector(text.substr(0, pos));
  Vector t = pos == std::string::npos ? Vector::Zero(g.ell()) : parse_vector(text.substr(pos + 1));
  if (t.size() == 0) t = Vector::Zero(g.ell());
  if (z.size() != g.m() || t.size() != g.ell()) {
    throw Error(ErrorCode::DimensionMismatch, "point '" + text + "' needs " + std::to_string(g.m()) + " + " +
                                                  std::to_string(g.ell()) + " coordinates");
  }
  return Point(z, t);
}

SetOracle parse_oracle(const GroupSpec& g, const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tok;
  for (std::string s; in >> s;) tok.push_back(s);
  if (tok.empty()) throw Error(ErrorCode::ParseError, "empty oracle description");
  const std::string& kind = tok[0];
  std::vector<double> args;
  for (std::size_t i = 1; i < tok.size(); ++i) args.push_back(parse_real(tok[i], "oracle '" + text + "'"));
  const auto arity = [&](std::size_t n) {
    if (args.size() != n) {
      throw Error(ErrorCode::ParseError,
                  "oracle '" + kind + "' takes " + std::to_string(n) + " numbers, got " + std::to_string(args.size()));
    }
  };

  if (kind == "halfspace") {
    arity(static_cast<std::size_t>(g.dim()) + 1);
    Vector a(g.dim());
    for (int i = 0; i < g.dim(); ++i) a[i] = args[static_cast<std::size_t>(i)];
    return oracles::halfspace(g, a, args.back());
  }
  if (kind == "paper-example-y-halfplane" || kind == "punctured-y-halfplane") {
    arity(0);
    if (g.m() != 2 || g.ell() != 1) throw Error(ErrorCode::InvalidArgument, kind + " needs the group heisenberg1");
    return oracles::punctured_upper_halfplane(g);
  }
  if (kind == "xgraph") {
    arity(3);
    require_hxr_dims(g, kind);
    // Above the X-graph of (a0, b, c): the half-space x > a0 y + c u + b t.
    const Vector a = (Vector(4) << 1.0, -args[0], -args[2], -args[1]).finished();
    return oracles::halfspace(g, a, 0.0);
  }
  if (kind == "ugraph") {
    arity(3);
    require_hxr_dims(g, kind);
    const Vector a = (Vector(4) << -args[0], -args[1], 1.0, -args[2]).finished();
    return oracles::halfspace(g, a, 0.0);
  }
  if (kind == "ball") {
    arity(1);
    return oracles::euclidean_ball(g, Vector::Zero(g.dim()), args[0]);
  }
  throw Error(ErrorCode::ParseError, "unknown oracle '" + kind + "'");
}

namespace {

struct Common {
  std::string group = "heisenberg1";
  std::string spec;
  std::uint64_t seed = 0;
  int samples = 0;  // 0: command default
  double tol = 0.0;  // 0: command default
  std::string out;
  std::string format = "json";
};

struct Outcome {
  Json report;
  std::string csv;
  int code = kOk;
};

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::HormanderFails: return kHormanderFails;
    case ErrorCode::ParseError:
    case ErrorCode::NonSkew:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NonFinite:
    case ErrorCode::InvalidArgument:
    case ErrorCode::BadP: return kInputError;
    default: return kCheckFailed;
  }
}

Json header(const std::string& command, const GroupSpec* g, const Common& c) {
  Json doc;
  doc["schema"] = io::kSchemaVersion;
  doc["command"] = command;
  if (g) doc["group"] = g->name();
  doc["seed"] = c.seed;
  return doc;
}

void merge(Json& into, const Json& from) {
  for (const auto& item : from.items()) into[item.key()] = item.value();
}

std::string csv_of(const std::vector<std::pair<std::string, std::string>>& cols) {
  std::string head, row;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    head += (i ? "," : "") + cols[i].first;
    row += (i ? "," : "") + cols[i].second;
  }
  return head + "\n" + row + "\n";
}

Vector default_xi(const GroupSpec& g, const std::string& text) {
  if (text.empty()) return Vector::Unit(g.m(), 0);
  Vector xi = parse_vector(text);
  if (xi.size() != g.m()) {
    throw Error(ErrorCode::DimensionMismatch, "--xi needs " + std::to_string(g.m()) + " components");
  }
  return xi;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Step-two Carnot group toolkit", "carnot"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values; unknown keys are rejected");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Common c;
  app.add_option("--group,--builtin", c.group, "builtin group name or spec-file path")->capture_default_str();
  app.add_option("--spec", c.spec, "group spec JSON file (overrides --group)");
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_option("--samples", c.samples, "sample count (command specific)");
  app.add_option("--tol", c.tol, "tolerance (command specific)");
  app.add_option("--out", c.out, "write the report to this path instead of stdout");
  app.add_option("--format", c.format, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  std::string xi_text, target_text, point_text, oracle_text;
  std::string radii_text = "1,0.5,0.25,0.125";
  int p_override = 0;
  int line_samples = 8;
  double box_half = 1.0;
  bool with_monotone = false;
  ConeParams cone;

  app.add_subcommand("group", "dimensions, Hormander rank and Metivier verdict");
  auto* solve_cmd = app.add_subcommand("solve", "solve Gamma(xi + u) - Gamma(xi, .., xi) = target");
  solve_cmd->add_option("--xi", xi_text, "horizontal base direction, comma separated");
  solve_cmd->add_option("--target", target_text, "target 'z..;t..'");
  solve_cmd->add_option("--p", p_override, "number of exponentials");
  auto* probe_cmd = app.add_subcommand("probe", "quadratic openness probe");
  probe_cmd->add_option("--xi", xi_text, "horizontal base direction");
  probe_cmd->add_option("--radii", radii_text, "strictly decreasing radii")->capture_default_str();
  probe_cmd->add_option("--p", p_override, "number of exponentials");
  auto* cone_cmd = app.add_subcommand("certify-cone", "inner-cone certificate at a point");
  cone_cmd->add_option("--oracle", oracle_text, "oracle description")->required();
  cone_cmd->add_option("--point", point_text, "cone vertex 'z..;t..'");
  cone_cmd->add_option("--xi", xi_text, "cone axis");
  cone_cmd->add_option("--eps-start", cone.eps_start)->capture_default_str();
  cone_cmd->add_option("--shrink", cone.shrink)->capture_default_str();
  cone_cmd->add_option("--s-max", cone.s_max)->capture_default_str();
  double fixed_eps = 0.0;
  cone_cmd->add_option("--epsilon", fixed_eps, "test this epsilon only instead of searching");
  auto* mono_cmd = app.add_subcommand("check-monotone", "sample horizontal convexity of a set and its complement");
  mono_cmd->add_option("--oracle", oracle_text, "oracle description")->required();
  mono_cmd->add_option("--box", box_half, "half-width of the sampling box")->capture_default_str();
  mono_cmd->add_option("--line-samples", line_samples)->capture_default_str();
  auto* classify_cmd = app.add_subcommand("classify", "classify the boundary of a monotone set in H x R");
  classify_cmd->add_option("--oracle", oracle_text, "oracle description")->required();
  classify_cmd->add_option("--point", point_text, "seed point near the boundary");
  classify_cmd->add_flag("--check-monotone", with_monotone, "also run check-monotone on the oracle");
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  std::string command = "carnot";
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    Json doc{{"schema", io::kSchemaVersion}, {"error", {{"code", "ParseError"}, {"message", e.what()}}}};
    out << doc.dump(2) << '\n';
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  const auto subs = app.get_subcommands();
  command = subs.front()->get_name();

  // Reports may go to a file; errors are always echoed to stderr.
  const auto emit = [&](const std::string& text) {
    if (c.out.empty()) {
      out << text;
      return true;
    }
    std::ofstream f(c.out);
    if (!f) {
      err << "error: cannot write '" << c.out << "'\n";
      return false;
    }
    f << text;
    return true;
  };

  try {
    const GroupSpec g = c.spec.empty() ? io::resolve_group(c.group) : io::load_group_file(c.spec);
    Outcome o;
    o.report = header(command, &g, c);

    if (command == "group") {
      const HormanderResult h = hormander_check(g);
      const MetivierVerdict mv = metivier_probe(g, c.samples > 0 ? c.samples : 256, c.seed);
      o.report["m"] = g.m();
      o.report["ell"] = g.ell();
      o.report["hormander"] = h.holds;
      o.report["hormander_rank"] = h.rank;
      o.report["metivier"] = to_string(mv.kind);
      o.report["witness"] = mv.witness ? io::vector_json(*mv.witness) : Json(nullptr);
      o.csv = csv_of({{"m", std::to_string(g.m())},
                      {"ell", std::to_string(g.ell())},
                      {"hormander", h.holds ? "true" : "false"},
                      {"hormander_rank", std::to_string(h.rank)},
                      {"metivier", to_string(mv.kind)}});
    } else if (command == "solve") {
      const Vector xi = default_xi(g, xi_text);
      const Point target = target_text.empty() ? Point::identity(g) : parse_point(g, target_text);
      const double tol = c.tol > 0 ? c.tol : 1e-9;
      const MultiExpSolution s =
          solve_gamma(g, xi, target, p_override > 0 ? std::optional<int>(p_override) : std::nullopt);
      merge(o.report, io::to_json(s));
      o.report["tol"] = tol;
      o.code = s.residual <= tol ? kOk : kCheckFailed;
      std::ostringstream csv;
      csv << "j";
      for (int i = 0; i < g.m(); ++i) csv << ",u" << i + 1;
      csv << '\n';
      for (std::size_t j = 0; j < s.u.size(); ++j) {
        csv << j + 1;
        for (Eigen::Index i = 0; i < s.u[j].size(); ++i) csv << ',' << io::format_double(s.u[j][i]);
        csv << '\n';
      }
      o.csv = csv.str();
    } else if (command == "probe") {
      const Vector xi = default_xi(g, xi_text);
      const Vector radii = parse_vector(radii_text);
      std::vector<double> r(radii.data(), radii.data() + radii.size());
      const OpennessReport rep = openness_probe(g, xi, r, c.samples > 0 ? c.samples : 8, c.seed,
                                                p_override > 0 ? std::optional<int>(p_override) : std::nullopt);
      merge(o.report, io::to_json(rep));
      o.code = rep.c0 > 0.0 ? kOk : kCheckFailed;
      std::ostringstream csv;
      io::write_openness_csv(csv, rep);
      o.csv = csv.str();
    } else if (command == "certify-cone") {
      const SetOracle oracle = parse_oracle(g, oracle_text);
      const Point vertex = point_text.empty() ? Point::identity(g) : parse_point(g, point_text);
      const Vector xi = default_xi(g, xi_text);
      cone.seed = c.seed;
      if (c.samples > 0) cone.samples = c.samples;
      const ConeCertificate cert = fixed_eps > 0.0 ? cone_test(g, oracle, vertex, xi, fixed_eps, cone)
                                                   : cone_certify(g, oracle, vertex, xi, cone);
      o.report["oracle"] = oracle_text;
      merge(o.report, io::to_json(cert));
      o.code = cert.passed() ? kOk : kCheckFailed;
      std::vector<Point> pts;
      std::vector<std::string> verdicts;
      if (cert.witness) {
        pts.push_back(*cert.witness);
        verdicts.emplace_back("Out");
      }
      std::ostringstream csv;
      io::write_points_csv(csv, g, pts, verdicts);
      o.csv = csv.str();
    } else if (command == "check-monotone") {
      const SetOracle oracle = parse_oracle(g, oracle_text);
      ConvexityParams params;
      params.box = Box::cube(g.dim(), box_half);
      params.seed = c.seed;
      params.line_samples = line_samples;
      if (c.samples > 0) params.n_pairs = c.samples;
      const MonotonicityReport rep = monotone_check(g, oracle, params);
      o.report["oracle"] = oracle_text;
      merge(o.report, io::to_json(rep));
      const std::string kind = oracle_text.substr(0, oracle_text.find(' '));
      if (kind == "paper-example-y-halfplane" || kind == "punctured-y-halfplane") {
        const Point p = Point::from_coords(g, (Vector(3) << 1, 0, 1).finished());
        const Point q = Point::from_coords(g, (Vector(3) << -1, 0, -1).finished());
        const MidpointWitness mw = euclidean_midpoint_witness(g, oracle, p, q);
        o.report["midpoint_witness"] = Json{{"p", io::point_json(mw.p)},
                                            {"q", io::point_json(mw.q)},
                                            {"midpoint", io::point_json(mw.midpoint)},
                                            {"endpoints_in", mw.endpoints_in},
                                            {"midpoint_in", mw.midpoint_in},
                                            {"euclidean_nonconvex", mw.shows_euclidean_nonconvexity()}};
      }
      o.code = rep.verdict == MonotoneVerdict::Monotone ? kOk : kCheckFailed;
      std::vector<Point> pts;
      std::vector<std::string> verdicts;
      for (const auto* part : {&rep.set, &rep.complement}) {
        for (const SegmentWitness& w : part->witnesses) {
          pts.push_back(w.point);
          verdicts.push_back(oracle.classify(w.point) == Verdict::In ? "In" : "Out");
        }
      }
      std::ostringstream csv;
      io::write_points_csv(csv, g, pts, verdicts);
      o.csv = csv.str();
    } else if (command == "classify") {
      const SetOracle oracle = parse_oracle(g, oracle_text);
      const Point seed_point = point_text.empty() ? Point::identity(g) : parse_point(g, point_text);
      ClassifyParams params;
      params.seed = c.seed;
      if (c.tol > 0) params.verify_tol = c.tol;
      if (c.samples > 0) params.grid_n = c.samples;
      const ClassificationResult res = classify_boundary(g, oracle, seed_point, params);
      o.report["oracle"] = oracle_text;
      merge(o.report, io::to_json(res));
      o.code = res.verified ? kOk : kCheckFailed;
      if (with_monotone) {
        ConvexityParams mp;
        mp.box = Box::cube(g.dim(), 1.0);
        mp.seed = c.seed;
        const MonotonicityReport rep = monotone_check(g, oracle, mp);
        o.report["monotonicity"] = io::to_json(rep);
        if (rep.verdict != MonotoneVerdict::Monotone) o.code = kCheckFailed;
      }
      std::ostringstream csv;
      io::write_classification_csv(csv, res);
      o.csv = csv.str();
    }

    const std::string text = c.format == "csv" ? o.csv : o.report.dump(2) + "\n";
    if (!emit(text)) return kInputError;
    return o.code;
  } catch (const Error& e) {
    Json doc{{"schema", io::kSchemaVersion},
             {"command", command},
             {"error", {{"code", to_string(e.code())}, {"message", e.what()}}}};
    err << "error: " << e.what() << '\n';
    emit(doc.dump(2) + "\n");
    return exit_code_for(e.code());
  }
}

}  // namespace carnot::cli
