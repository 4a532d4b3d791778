#include "nodalscope/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "nodalscope/errors.hpp"

namespace nodalscope {

Json spec_to_json(const EigenfunctionSpec& spec) {
  Json modes = Json::array();
  for (const auto& md : spec.modes()) {
    Json k = Json::array();
    for (int d = 0; d < spec.dim(); ++d) k.push_back(md.k.k[d]);
    modes.push_back({{"k", k}, {"a", md.a}, {"b", md.b}});
  }
  Json j = {{"dim", spec.dim()}, {"m", spec.m()}, {"modes", modes}};
  j["seed"] = spec.seed() ? Json(*spec.seed()) : Json(nullptr);
  return j;
}

EigenfunctionSpec spec_from_json(const Json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    const long m = j.at("m").get<long>();
    std::optional<std::uint64_t> seed;
    if (j.contains("seed") && !j.at("seed").is_null()) seed = j.at("seed").get<std::uint64_t>();
    std::vector<Mode> modes;
    for (const auto& jm : j.at("modes")) {
      const auto& k = jm.at("k");
      if (static_cast<int>(k.size()) != dim) throw InvalidSpecError("mode k has wrong length");
      Mode md;
      md.k.dim = dim;
      for (int d = 0; d < dim; ++d) md.k.k[d] = k.at(d).get<int>();
      md.a = jm.at("a").get<double>();
      md.b = jm.at("b").get<double>();
      modes.push_back(md);
    }
    return EigenfunctionSpec(TorusModel(dim), m, std::move(modes), seed);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidSpecError(std::string("malformed spec JSON: ") + e.what());
  } catch (const RangeError& e) {
    throw InvalidSpecError(e.what());
  }
}

EigenfunctionSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSpecError("cannot open spec file " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidSpecError("cannot parse " + path.string() + ": " + e.what());
  }
  return spec_from_json(j);
}

void save_spec(const EigenfunctionSpec& spec, const std::filesystem::path& path) {
  write_json_file(spec_to_json(spec), path);
}

Json point_to_json(const Point& p) {
  Json a = Json::array();
  for (int d = 0; d < p.dim(); ++d) a.push_back(p[d]);
  return a;
}

Json certificate_to_json(const EquidistCertificate& c) {
  return {{"spec_id", c.spec_id},
          {"dim", c.dim},
          {"r", c.r},
          {"K1", c.K1},
          {"K2", c.K2},
          {"min_ratio", c.min_ratio},
          {"max_ratio", c.max_ratio},
          {"lower_bound", c.lower_bound},
          {"upper_bound", c.upper_bound},
          {"pass", c.pass},
          {"centers_used", c.centers_used},
          {"cover_fraction", c.cover_fraction},
          {"mode", c.mode == CertifyMode::Sandwich ? "sandwich" : "centers"}};
}

Json doubling_summary_to_json(const DoublingSummary& s) {
  return {{"m", s.m},         {"lambda", s.lambda},       {"r", s.r},
          {"c_star", s.c_star}, {"max_index", s.max_index}, {"n_records", s.n_records}};
}

Json cube_index_to_json(const CubeIndex& c) {
  Json x = Json::array();
  for (int d = 0; d < c.center.dim(); ++d) x.push_back(c.argmax_x[d]);
  return {{"center", point_to_json(c.center)},
          {"r", c.half_side},
          {"N_value", c.n_value},
          {"argmax_ball", {{"x", x}, {"t", c.argmax_t}, {"s", c.argmax_scale}}},
          {"flags", {{"budget_exhausted", c.budget_exhausted}, {"lower_bound", true}}},
          {"balls_scanned", c.balls_scanned}};
}

Json singular_points_to_json(std::span<const SingularPoint> points) {
  Json a = Json::array();
  for (const auto& p : points)
    a.push_back({{"location", point_to_json(p.location)},
                 {"vanishing_order", p.vanishing_order},
                 {"residual", p.residual}});
  return a;
}

namespace {

Json bound_to_json(const PredictedBound& b) {
  return {{"value", b.value}, {"constant", b.constant}, {"provenance", b.provenance}};
}

PredictedBound bound_from_json(const Json& j) {
  return {j.at("value").get<double>(), j.at("constant").get<double>(),
          j.at("provenance").get<std::string>()};
}

Json opt_seed(const std::optional<std::uint64_t>& s) { return s ? Json(*s) : Json(nullptr); }

std::optional<std::uint64_t> seed_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::uint64_t>();
}

}  // namespace

Json report_to_json(const BoundsReport& r) {
  Json eq2 = Json::array();
  for (const auto& p : r.eq2) eq2.push_back({{"alpha", p.alpha}, {"value", p.value}, {"c1", p.c1}});
  Json j;
  j["meta"] = {{"m", r.m}, {"seed", opt_seed(r.seed)}, {"dim", r.dim}, {"lambda", r.lambda},
               {"r", r.r}, {"K1", r.K1},  {"K2", r.K2}};
  j["measured"] = {{"nodal_length", r.nodal.nodal_length},
                   {"max_vanishing_order", r.nodal.max_vanishing_order},
                   {"max_singular_count", r.nodal.max_singular_count},
                   {"c_star", r.c_star},
                   {"max_doubling_index", r.max_doubling_index},
                   {"N_lift", r.n_lift},
                   {"N_lift_lower_bound", r.n_lift_lower_bound}};
  j["predicted"] = {{"eq2", eq2},
                    {"eq2_provenance", r.eq2_provenance},
                    {"eq3", bound_to_json(r.eq3)},
                    {"eq4", bound_to_json(r.eq4)},
                    {"eq5", bound_to_json(r.eq5)}};
  j["verdicts"] = r.verdicts;
  j["parameters"] = {{"alphas", r.config.alphas}, {"beta", r.config.beta}, {"kappa", r.config.kappa}};
  j["calibration"] = {{"c3", r.calibration.c3},         {"c4", r.calibration.c4},
                      {"m", r.calibration.m},           {"lambda", r.calibration.lambda},
                      {"r", r.calibration.r},           {"seed", opt_seed(r.calibration.seed)}};
  return j;
}

BoundsReport report_from_json(const Json& j) {
  BoundsReport r;
  const auto& meta = j.at("meta");
  r.m = meta.at("m").get<long>();
  r.seed = seed_from(meta.at("seed"));
  r.dim = meta.at("dim").get<int>();
  r.lambda = meta.at("lambda").get<double>();
  r.r = meta.at("r").get<double>();
  r.K1 = meta.at("K1").get<double>();
  r.K2 = meta.at("K2").get<double>();
  const auto& ms = j.at("measured");
  r.nodal.nodal_length = ms.at("nodal_length").get<double>();
  r.nodal.max_vanishing_order = ms.at("max_vanishing_order").get<int>();
  r.nodal.max_singular_count = ms.at("max_singular_count").get<int>();
  r.c_star = ms.at("c_star").get<double>();
  r.max_doubling_index = ms.at("max_doubling_index").get<double>();
  r.n_lift = ms.at("N_lift").get<double>();
  r.n_lift_lower_bound = ms.at("N_lift_lower_bound").get<bool>();
  const auto& pr = j.at("predicted");
  for (const auto& p : pr.at("eq2"))
    r.eq2.push_back({p.at("alpha").get<double>(), p.at("value").get<double>(),
                     p.at("c1").get<double>()});
  r.eq2_provenance = pr.at("eq2_provenance").get<std::string>();
  r.eq3 = bound_from_json(pr.at("eq3"));
  r.eq4 = bound_from_json(pr.at("eq4"));
  r.eq5 = bound_from_json(pr.at("eq5"));
  r.verdicts = j.at("verdicts").get<std::map<std::string, std::string>>();
  const auto& cf = j.at("parameters");
  r.config.alphas = cf.at("alphas").get<std::vector<double>>();
  r.config.beta = cf.at("beta").get<double>();
  r.config.kappa = cf.at("kappa").get<double>();
  const auto& cb = j.at("calibration");
  r.calibration.c3 = cb.at("c3").get<double>();
  r.calibration.c4 = cb.at("c4").get<double>();
  r.calibration.m = cb.at("m").get<long>();
  r.calibration.lambda = cb.at("lambda").get<double>();
  r.calibration.r = cb.at("r").get<double>();
  r.calibration.seed = seed_from(cb.at("seed"));
  return r;
}

namespace {

void write_coords(std::ostream& os, const Point& p) {
  for (int d = 0; d < p.dim(); ++d) os << p[d] << ',';
}

void coord_header(std::ostream& os, int dim) {
  os << "x,y,";
  if (dim == 3) os << "z,";
}

}  // namespace

void write_ball_stats_csv(std::ostream& os, std::span<const BallStat> stats) {
  os << std::setprecision(17);
  coord_header(os, stats.empty() ? 2 : stats.front().center.dim());
  os << "radius,sup_sq,mass,error_bound\n";
  for (const auto& s : stats) {
    write_coords(os, s.center);
    os << s.radius << ',' << s.sup_sq << ',' << s.mass << ',' << s.error_bound << '\n';
  }
}

void write_doubling_csv(std::ostream& os, std::span<const DoublingRecord> records) {
  os << std::setprecision(17);
  coord_header(os, records.empty() ? 2 : records.front().center.dim());
  os << "delta,index_sup,index_l2,index_q,r,lambda\n";
  for (const auto& r : records) {
    write_coords(os, r.center);
    os << r.delta << ',' << r.index_sup << ',' << r.index_l2 << ',';
    if (r.index_q) os << *r.index_q;
    os << ',' << r.r << ',' << r.lambda << '\n';
  }
}

void write_segments_csv(std::ostream& os, const NodalSet& ns) {
  os << std::setprecision(17) << "x1,y1,x2,y2\n";
  for (const auto& s : ns.segments)
    os << s.a[0] << ',' << s.a[1] << ',' << s.b[0] << ',' << s.b[1] << '\n';
}

std::string config_hash(const Json& config) {
  const std::string text = config.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json with_provenance(Json artifact, const Json& config) {
  Json cfg = config;
  cfg["hash"] = config_hash(config);
  artifact["schema_version"] = kSchemaVersion;
  artifact["config"] = cfg;
  return artifact;
}

void write_json_file(const Json& j, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace nodalscope
