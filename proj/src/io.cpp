#include "diamond/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace diamond::io {
namespace {

using ensemble::ThetaPolicy;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw FormatError(std::string("bad ") + what + ": '" + text + "'");
  }
}

std::int64_t parse_int(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw FormatError(std::string("bad ") + what + ": '" + text + "'");
  }
}

double longitude(double x, double y) {
  double phi = std::atan2(y, x);
  if (phi < 0) phi += 2.0 * std::numbers::pi;
  return phi;
}

std::vector<std::int64_t> int_array(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) throw FormatError(std::string("model document needs an integer array '") + key + "'");
  std::vector<std::int64_t> out;
  for (const auto& v : doc[key]) {
    if (!v.is_number_integer()) throw FormatError(std::string("'") + key + "' must hold integers");
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

Json rational_array(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(v.to_string());
  return out;
}

Json vec_json(const geometry::Vec3<double>& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json sup_json(const metrics::SupDiscrepancy& d) {
  return Json{{"value", d.value}, {"centers", d.centers}, {"witness", witness_to_json(d.witness)}};
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Json theta_to_json(const ThetaPolicy& policy) {
  switch (policy.kind) {
    case ThetaPolicy::Kind::zeros:
      return "zeros";
    case ThetaPolicy::Kind::fixed:
      return Json{{"kind", "fixed"}, {"values", policy.values}};
    case ThetaPolicy::Kind::seeded_random:
      return Json{{"kind", "seeded-random"}, {"seed", policy.seed}};
  }
  return "zeros";
}

ThetaPolicy theta_from_json(const Json& doc) {
  if (doc.is_null()) return ThetaPolicy::zeros();
  if (doc.is_string()) return parse_theta(doc.get<std::string>());
  if (doc.is_array()) {
    std::vector<double> values;
    for (const auto& v : doc) {
      if (!v.is_number()) throw FormatError("theta values must be numbers");
      values.push_back(v.get<double>());
    }
    return ThetaPolicy::fixed(std::move(values));
  }
  if (!doc.is_object() || !doc.contains("kind")) throw FormatError("theta_policy must be \"zeros\", a list, or an object with a kind");
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "zeros") return ThetaPolicy::zeros();
  if (kind == "fixed") return theta_from_json(doc.value("values", Json::array()));
  if (kind == "seeded-random") {
    if (!doc.contains("seed") || !doc["seed"].is_number_unsigned()) throw FormatError("seeded-random theta needs a non-negative integer seed");
    return ThetaPolicy::seeded(doc["seed"].get<std::uint64_t>());
  }
  throw FormatError("unknown theta kind '" + kind + "'");
}

ThetaPolicy parse_theta(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty() || text == "zeros") return ThetaPolicy::zeros();
  if (text.rfind("seed:", 0) == 0) {
    const auto seed = parse_int(text.substr(5), "theta seed");
    if (seed < 0) throw FormatError("theta seed must be non-negative");
    return ThetaPolicy::seeded(static_cast<std::uint64_t>(seed));
  }
  std::vector<double> values;
  for (const auto& field : split(text, ',')) values.push_back(parse_double(trim(field), "theta value"));
  return ThetaPolicy::fixed(std::move(values));
}

Json model_to_json(const ensemble::ModelSpec& spec) {
  return Json{{"M", spec.M},         {"n", spec.pieces()}, {"t", spec.t}, {"alpha", spec.alpha},
              {"beta", spec.beta}, {"theta_policy", theta_to_json(spec.theta)}};
}

ensemble::ModelSpec model_from_json(const Json& doc) {
  if (!doc.is_object()) throw FormatError("model document must be a JSON object");
  if (!doc.contains("M") || !doc["M"].is_number_integer()) throw FormatError("model document needs an integer 'M'");
  ensemble::ModelSpec spec;
  const auto M = doc["M"].get<std::int64_t>();
  if (M < INT32_MIN || M > INT32_MAX) throw FormatError("'M' out of range");
  spec.M = static_cast<int>(M);
  spec.t = int_array(doc, "t");
  spec.alpha = int_array(doc, "alpha");
  spec.beta = int_array(doc, "beta");
  if (doc.contains("n")) {
    if (!doc["n"].is_number_integer()) throw FormatError("'n' must be an integer");
    if (doc["n"].get<std::int64_t>() != static_cast<std::int64_t>(spec.alpha.size())) {
      throw ensemble::ValidationError(ensemble::ValidationCode::shape_mismatch, "'n' does not match the number of pieces in alpha");
    }
  }
  spec.theta = theta_from_json(doc.contains("theta_policy") ? doc["theta_policy"] : Json());
  return spec;
}

ensemble::ModelSpec load_model_file(const std::string& path) {
  Json doc = read_json_file(path);
  // Sidecars carry the model under "model".
  if (doc.is_object() && doc.contains("model") && !doc.contains("t")) doc = doc["model"];
  return model_from_json(doc);
}

void write_points_csv(std::ostream& os, const ensemble::DiamondModel& model, const geometry::PointSet<double>& points) {
  os << "index,parallel,i,x,y,z,phi,z_height\n";
  const int p = model.parallels();
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto x = points[k];
    const auto& tag = points.tag(k);
    double height = x.z();
    if (tag.parallel == 0) height = 1.0;
    else if (tag.parallel == p + 1) height = -1.0;
    else if (tag.parallel >= 1 && tag.parallel <= p) height = model.z(tag.parallel).to_double();
    os << k << ',' << tag.parallel << ',' << tag.index << ',' << format_double(x.x()) << ',' << format_double(x.y()) << ','
       << format_double(x.z()) << ',' << format_double(longitude(x.x(), x.y())) << ',' << format_double(height) << '\n';
  }
}

geometry::PointSet<double> read_points_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("points file is empty");
  const auto header = split(trim(line), ',');
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    return std::nullopt;
  };
  const auto cx = column("x");
  const auto cy = column("y");
  const auto cz = column("z");
  if (!cx || !cy || !cz) throw FormatError("points header needs x, y and z columns");
  const auto cparallel = column("parallel");
  const auto cindex = column("i");

  std::vector<double> xyz;
  std::vector<geometry::PointTag> tags;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line), ',');
    if (fields.size() != header.size()) throw FormatError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) + " fields");
    for (const auto c : {*cx, *cy, *cz}) xyz.push_back(parse_double(trim(fields[c]), "coordinate"));
    geometry::PointTag tag;
    if (cparallel) tag.parallel = static_cast<int>(parse_int(trim(fields[*cparallel]), "parallel"));
    if (cindex) tag.index = static_cast<int>(parse_int(trim(fields[*cindex]), "index"));
    tags.push_back(tag);
  }
  if (tags.empty()) throw FormatError("points file has no rows");
  geometry::Points3<double> m(3, static_cast<Eigen::Index>(tags.size()));
  for (std::size_t k = 0; k < tags.size(); ++k) m.col(static_cast<Eigen::Index>(k)) << xyz[3 * k], xyz[3 * k + 1], xyz[3 * k + 2];
  return geometry::PointSet<double>(std::move(m), std::move(tags));
}

Json points_sidecar(const ensemble::DiamondModel& model) {
  const auto part = partition::build_partition(model);
  return Json{{"M", model.M()},
              {"N", model.N()},
              {"parallels", model.parallels()},
              {"r", model.r_values()},
              {"z", rational_array(model.z_values())},
              {"h", rational_array(part.heights())},
              {"theta", model.theta_values()},
              {"model", model_to_json(model.spec())}};
}

void write_partition_csv(std::ostream& os, const partition::Partition& part, const partition::MatchingReport& matching) {
  os << "id,kind,j,i,phi_lo,phi_hi,h_lo,h_hi,point,area\n";
  for (std::size_t id = 0; id < part.size(); ++id) {
    const auto& r = part.region(id);
    os << id << ',' << partition::to_string(r.kind) << ',' << r.parallel << ',' << r.index << ',' << format_double(r.phi_lo) << ','
       << format_double(r.phi_hi) << ',' << r.h_lo << ',' << r.h_hi << ',';
    if (id < matching.region_to_point.size()) os << matching.region_to_point[id];
    os << ',' << format_double(partition::region_area(r)) << '\n';
  }
}

Json partition_to_json(const partition::Partition& part, const partition::MatchingReport& matching) {
  Json regions = Json::array();
  for (std::size_t id = 0; id < part.size(); ++id) {
    const auto& r = part.region(id);
    Json rec{{"id", id},
             {"kind", partition::to_string(r.kind)},
             {"j", r.parallel},
             {"i", r.index},
             {"phi_lo", r.phi_lo},
             {"phi_hi", r.phi_hi},
             {"h_lo", r.h_lo.to_string()},
             {"h_hi", r.h_hi.to_string()},
             {"area", partition::region_area(r)}};
    rec["point"] = id < matching.region_to_point.size() ? Json(matching.region_to_point[id]) : Json();
    regions.push_back(std::move(rec));
  }
  return Json{{"M", part.model().M()},
              {"N", part.model().N()},
              {"h", rational_array(part.heights())},
              {"matching_ok", matching.ok},
              {"regions", std::move(regions)}};
}

Json witness_to_json(const metrics::CapWitness& w) {
  return Json{{"center", vec_json(w.center)}, {"t", w.t}, {"mode", w.mode == geometry::CapMode::closed ? "closed" : "open"}};
}

Json constants_to_json(const ensemble::ModelConstants& k) {
  return Json{{"A", k.A},
              {"c", k.c},
              {"a1", k.a1},
              {"a2", k.a2},
              {"k1", k.k1},
              {"k2", k.k2},
              {"d1", k.d1},
              {"d2", k.d2},
              {"e1", k.e1},
              {"e2", k.e2},
              {"g1", k.g1},
              {"g2", k.g2},
              {"c1", k.c1},
              {"c2", k.c2},
              {"a1_proof", k.a1_proof},
              {"a1_empirical", k.a1_empirical},
              {"a2_empirical", k.a2_empirical},
              {"a1_collar", k.a1_collar},
              {"a1_fallback", k.a1_fallback},
              {"k1_dot", k.k1_dot},
              {"k2_dot", k.k2_dot},
              {"k1_tilde", k.k1_tilde},
              {"k2_tilde", k.k2_tilde},
              {"range", Json::array({k.range_lo, k.range_hi})}};
}

Json report_to_json(const metrics::MetricsReport& r) {
  Json riesz = Json::array();
  for (const auto& [s, e] : r.riesz) riesz.push_back(Json{{"s", s}, {"energy", e}});
  Json out{{"N", r.N},
           {"separation", r.separation},
           {"covering_radius_estimate", r.covering_estimate},
           {"covering_radius_upper", r.covering_upper ? Json(*r.covering_upper) : Json()},
           {"mesh_ratio", r.mesh_ratio},
           {"riesz", std::move(riesz)},
           {"log_energy", r.log_energy},
           {"sum_distances", r.sum_distances},
           {"d_sup_exact", r.d_sup_exact ? sup_json(*r.d_sup_exact) : Json()},
           {"d_sup_estimate", sup_json(r.d_sup_estimate)},
           {"d_polar_max", r.d_polar_max ? Json(*r.d_polar_max) : Json()},
           {"d_equatorial", r.d_equatorial ? Json(*r.d_equatorial) : Json()},
           {"d_l2_stolarsky", r.d_l2_stolarsky},
           {"d_l2_quadrature", r.d_l2_quadrature ? Json(*r.d_l2_quadrature) : Json()}};
  out["envelope"] = r.envelope ? Json{{"lower", r.envelope->lower}, {"upper", r.envelope->upper}} : Json();
  out["constants"] = r.constants ? constants_to_json(*r.constants) : Json();
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace diamond::io
