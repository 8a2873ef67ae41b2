#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "diamond/ensemble.hpp"
#include "diamond/io.hpp"
#include "diamond/metrics.hpp"
#include "diamond/partition.hpp"
#include "diamond/svg.hpp"

namespace {

using namespace diamond;
using io::Json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;
constexpr int kExitVerification = 3;

struct Source {
  std::optional<int> simple_M;
  std::string model_path;
  std::optional<std::string> theta;
  std::string points_path;
  unsigned workers = default_workers();
};

struct Input {
  std::optional<ensemble::DiamondModel> model;
  geometry::PointSet<double> points;
};

void add_source(CLI::App* cmd, Source& src, bool with_points) {
  auto* simple = cmd->add_option("--simple-M", src.simple_M, "simple model r_j = 4j with this M")->check(CLI::PositiveNumber);
  auto* model = cmd->add_option("--model", src.model_path, "model JSON file")->check(CLI::ExistingFile);
  simple->excludes(model);
  cmd->add_option("--theta", src.theta, "rotation phases: zeros, seed:<n> or a comma-separated list");
  if (with_points) cmd->add_option("--points", src.points_path, "points CSV (a .json sidecar next to it supplies the model)")->check(CLI::ExistingFile);
  cmd->add_option("--workers", src.workers, "worker threads (default: DIAMOND_WORKERS or hardware)")->check(CLI::PositiveNumber);
}

std::optional<ensemble::ModelSpec> spec_from(const Source& src) {
  std::optional<ensemble::ModelSpec> spec;
  if (src.simple_M) spec = ensemble::simple_model(*src.simple_M);
  else if (!src.model_path.empty()) spec = io::load_model_file(src.model_path);
  else if (!src.points_path.empty()) {
    auto sidecar = std::filesystem::path(src.points_path).replace_extension(".json");
    if (std::filesystem::exists(sidecar)) spec = io::load_model_file(sidecar.string());
  }
  if (spec && src.theta) spec->theta = io::parse_theta(*src.theta);
  return spec;
}

Input load(const Source& src, bool need_model) {
  Input in;
  if (auto spec = spec_from(src)) in.model = ensemble::validate(*spec);
  if (!src.points_path.empty()) {
    std::ifstream file(src.points_path);
    if (!file) throw std::runtime_error("cannot open " + src.points_path);
    in.points = io::read_points_csv(file);
  } else if (in.model) {
    in.points = ensemble::generate(*in.model);
  } else {
    throw CLI::ValidationError("input", "give --simple-M, --model or --points");
  }
  if (need_model && !in.model) throw CLI::ValidationError("input", "this command needs a model: --simple-M, --model or a points sidecar");
  return in;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) std::cout << text;
  else io::write_text_file(out, text);
}

Json envelope_json(const ensemble::DiamondModel& model, double value) {
  const auto env = metrics::simple_model_envelope(model.N());
  return Json{{"lower", env.lower}, {"upper", env.upper}, {"within", value >= env.lower && value <= env.upper}};
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--M-range", "expected a:b");
  const int a = std::stoi(text.substr(0, colon));
  const int b = std::stoi(text.substr(colon + 1));
  if (a < 1 || b < a) throw CLI::ValidationError("--M-range", "expected 1 <= a <= b");
  return {a, b};
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
  Source src;
  std::string out;
};

int run_gen(const GenArgs& a) {
  const auto in = load(a.src, true);
  std::ostringstream csv;
  io::write_points_csv(csv, *in.model, in.points);
  if (a.out.empty()) {
    std::cout << csv.str();
    return kExitOk;
  }
  const auto sidecar = std::filesystem::path(a.out).replace_extension(".json");
  io::write_text_file(a.out, csv.str());
  io::write_text_file(sidecar.string(), io::points_sidecar(*in.model).dump(2) + "\n");
  std::cerr << "wrote " << in.points.size() << " points to " << a.out << " and " << sidecar.string() << "\n";
  return kExitOk;
}

// --- partition ---------------------------------------------------------------

struct PartitionArgs {
  Source src;
  std::string csv;
  std::string json;
};

int run_partition(const PartitionArgs& a) {
  const auto in = load(a.src, true);
  const auto part = partition::build_partition(*in.model);
  const auto matching = partition::verify_matching(part, in.points);
  if (!a.csv.empty()) {
    std::ostringstream os;
    io::write_partition_csv(os, part, matching);
    io::write_text_file(a.csv, os.str());
  }
  const std::string doc = io::partition_to_json(part, matching).dump(2) + "\n";
  if (!a.json.empty()) io::write_text_file(a.json, doc);
  if (a.csv.empty() && a.json.empty()) std::cout << doc;
  return kExitOk;
}

// --- verify ------------------------------------------------------------------

int run_verify(const Source& src) {
  const auto in = load(src, true);
  const auto& model = *in.model;
  const auto part = partition::build_partition(model);
  const auto matching = partition::verify_matching(part, in.points);

  const double target = 4.0 * std::numbers::pi / static_cast<double>(model.N());
  double worst = 0.0;
  for (const auto& r : part.regions()) worst = std::max(worst, std::abs(partition::region_area(r) - target) / target);
  const bool areas_ok = worst <= 1e-12;

  std::cout << "model: M=" << model.M() << " N=" << model.N() << " parallels=" << model.parallels() << "\n";
  std::cout << "regions: " << part.size() << " points: " << in.points.size() << "\n";
  std::cout << "equal areas: " << (areas_ok ? "ok" : "FAIL") << " (max relative deviation " << io::format_double(worst) << ")\n";
  std::cout << "matching: " << (matching.ok ? "ok" : "FAIL") << " (" << matching.inequalities_checked << " exact inequalities)";
  if (!matching.ok) std::cout << ": " << matching.failure;
  std::cout << "\n";
  const bool ok = areas_ok && matching.ok && part.size() == in.points.size();
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitVerification;
}

// --- metrics -----------------------------------------------------------------

struct MetricsArgs {
  Source src;
  std::string out;
  std::vector<double> riesz_s{1.0};
  std::size_t samples = 2000;
  std::uint64_t seed = 1;
  std::size_t exact_max = 150;
  bool no_exact = false;
  std::size_t quadrature_centers = 0;
  std::size_t t_nodes = 512;
  std::size_t covering_directions = 0;
};

int run_metrics(const MetricsArgs& a) {
  const auto in = load(a.src, false);
  metrics::ReportOptions opt;
  opt.riesz_s = a.riesz_s;
  opt.estimate_samples = a.samples;
  opt.seed = a.seed;
  opt.exact_max_points = a.exact_max;
  opt.exact = !a.no_exact;
  opt.quadrature_centers = a.quadrature_centers;
  opt.quadrature_t_nodes = a.t_nodes;
  opt.covering_directions = a.covering_directions;
  opt.workers = a.src.workers;
  const auto report = metrics::compute_report(in.points, in.model ? &*in.model : nullptr, opt);
  emit(io::report_to_json(report).dump(2) + "\n", a.out);
  return kExitOk;
}

// --- discrepancy ---------------------------------------------------------------

struct DiscrepancyArgs {
  Source src;
  std::string mode = "estimate";
  std::string out;
  std::size_t samples = 2000;
  std::uint64_t seed = 1;
  std::size_t exact_max = 150;
  std::size_t centers = 2000;
  std::size_t t_nodes = 0;
};

int run_discrepancy(const DiscrepancyArgs& a) {
  const bool needs_model = a.mode == "polar" || a.mode == "equatorial";
  const auto in = load(a.src, needs_model);
  Json doc{{"mode", a.mode}, {"N", in.points.size()}};
  if (in.model) doc["M"] = in.model->M();
  double value = 0.0;
  bool bounded_by_envelope = true;

  if (a.mode == "polar") {
    const auto profile = metrics::polar_cap_profile(*in.model, in.points);
    Json entries = Json::array();
    bool matches = true;
    for (const auto& e : profile.entries) {
      Json row{{"j", e.j}, {"count", e.count}, {"exact", e.exact.to_string()}, {"value", e.value}};
      if (e.closed_form) {
        row["closed_form"] = e.closed_form->to_string();
        matches = matches && *e.closed_form == e.exact;
      }
      entries.push_back(std::move(row));
    }
    value = profile.max;
    doc["value"] = value;
    doc["max_exact"] = profile.max_exact.to_string();
    doc["argmax_j"] = profile.entries.empty() ? 0 : profile.entries[profile.argmax].j;
    if (profile.closed_form) doc["closed_form_matches"] = matches;
    doc["profile"] = std::move(entries);
  } else if (a.mode == "equatorial") {
    const auto eq = metrics::equatorial_discrepancy(*in.model, in.points);
    value = eq.value.to_double();
    doc["value"] = value;
    doc["exact"] = eq.value.to_string();
    doc["counted"] = eq.counted.to_string();
    doc["agrees"] = eq.value == eq.counted;
  } else if (a.mode == "exact" || a.mode == "estimate") {
    const auto sup = a.mode == "exact" ? metrics::sup_discrepancy_exact(in.points, {a.exact_max, a.src.workers})
                                       : metrics::sup_discrepancy_estimate(in.points, a.samples, a.seed, a.src.workers);
    value = sup.value;
    doc["value"] = value;
    doc["witness"] = io::witness_to_json(sup.witness);
    doc["centers"] = sup.centers;
    if (a.mode == "estimate") {
      doc["samples"] = a.samples;
      doc["seed"] = a.seed;
      doc["lower_bound"] = true;
    }
  } else if (a.mode == "l2-stolarsky") {
    value = metrics::l2_discrepancy_stolarsky(in.points, a.src.workers);
    doc["value"] = value;
    doc["mean_pair_distance"] = metrics::mean_pair_distance(in.points, a.src.workers);
    bounded_by_envelope = false;
  } else {
    value = metrics::l2_discrepancy_quadrature(in.points, a.centers, a.t_nodes, a.src.workers);
    doc["value"] = value;
    doc["centers"] = a.centers;
    doc["t_nodes"] = a.t_nodes;
    bounded_by_envelope = false;
  }
  if (in.model && metrics::is_simple_model(in.model->spec())) {
    doc["envelope"] = envelope_json(*in.model, value);
    if (!bounded_by_envelope) doc["envelope"].erase("within");
  }
  emit(doc.dump(2) + "\n", a.out);
  return kExitOk;
}

// --- plot ----------------------------------------------------------------------

struct PlotArgs {
  Source src;
  std::string kind = "partition";
  std::string out;
  std::string range = "1:20";
  std::size_t samples = 400;
  std::uint64_t seed = 1;
};

int run_plot(const PlotArgs& a) {
  std::string svg_text;
  if (a.kind == "partition") {
    const auto in = load(a.src, true);
    svg_text = svg::render_partition(partition::build_partition(*in.model), in.points);
  } else {
    const auto [lo, hi] = parse_range(a.range);
    const auto base = spec_from(a.src);
    svg::Series polar{"polar caps (exact)", {}};
    svg::Series estimate{"sup over caps (estimate)", {}};
    std::vector<svg::Guide> guides;
    for (int M = lo; M <= hi; ++M) {
      auto spec = base ? ensemble::rescale(*base, M) : ensemble::simple_model(M);
      const auto model = ensemble::validate(spec);
      const auto points = ensemble::generate(model);
      const double root = std::sqrt(static_cast<double>(model.N()));
      polar.xy.emplace_back(M, root * metrics::polar_cap_profile(model, points).max);
      estimate.xy.emplace_back(M, root * metrics::sup_discrepancy_estimate(points, a.samples, a.seed, a.src.workers).value);
      if (M == hi) {
        if (metrics::is_simple_model(spec)) {
          guides = {{"lower 1", 1.0}, {"upper 4+2sqrt2", 4.0 + 2.0 * std::sqrt(2.0)}};
        } else {
          const auto k = ensemble::model_constants(model);
          guides = {{"lower c1", k.c1}, {"upper c2", k.c2}};
        }
      }
    }
    svg_text = svg::render_scaling({polar, estimate}, guides, "M", "sqrt(N) D");
  }
  io::write_text_file(a.out, svg_text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diamond ensemble point sets on the sphere: generation, partition, metrics"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* cmd_gen = app.add_subcommand("gen", "generate a point set (CSV plus a JSON sidecar)");
  add_source(cmd_gen, gen.src, false);
  cmd_gen->add_option("--out", gen.out, "CSV path; the sidecar goes next to it with a .json extension");

  PartitionArgs part;
  auto* cmd_part = app.add_subcommand("partition", "export the equal-area partition");
  add_source(cmd_part, part.src, true);
  cmd_part->add_option("--csv", part.csv, "write region records as CSV");
  cmd_part->add_option("--json", part.json, "write region records as JSON (default: stdout)");

  Source verify;
  auto* cmd_verify = app.add_subcommand("verify", "check equal areas and the point-region matching");
  add_source(cmd_verify, verify, true);

  MetricsArgs met;
  auto* cmd_met = app.add_subcommand("metrics", "separation, covering, energies and discrepancies as JSON");
  add_source(cmd_met, met.src, true);
  cmd_met->add_option("--out", met.out, "output file (default: stdout)");
  cmd_met->add_option("--riesz-s", met.riesz_s, "Riesz exponents")->check(CLI::PositiveNumber);
  cmd_met->add_option("--samples", met.samples, "random centers for the sup estimate");
  cmd_met->add_option("--seed", met.seed, "seed for the sup estimate");
  cmd_met->add_option("--exact-max", met.exact_max, "largest N for the exact sup discrepancy");
  cmd_met->add_flag("--no-exact", met.no_exact, "skip the exact sup discrepancy");
  cmd_met->add_option("--quadrature-centers", met.quadrature_centers, "centers for the quadrature L2 discrepancy (0: off)");
  cmd_met->add_option("--t-nodes", met.t_nodes, "height nodes for the quadrature L2 discrepancy (0: exact)");
  cmd_met->add_option("--covering-directions", met.covering_directions, "grid size for the covering estimate (0: 10N)");

  DiscrepancyArgs dis;
  auto* cmd_dis = app.add_subcommand("discrepancy", "one discrepancy measure as JSON");
  add_source(cmd_dis, dis.src, true);
  cmd_dis->add_option("--mode", dis.mode, "measure")
      ->check(CLI::IsMember({"polar", "equatorial", "exact", "estimate", "l2-stolarsky", "l2-quadrature"}));
  cmd_dis->add_option("--out", dis.out, "output file (default: stdout)");
  cmd_dis->add_option("--samples", dis.samples, "random centers (estimate)");
  cmd_dis->add_option("--seed", dis.seed, "seed (estimate)");
  cmd_dis->add_option("--exact-max", dis.exact_max, "largest N for exact mode");
  cmd_dis->add_option("--centers", dis.centers, "spiral centers (l2-quadrature)");
  cmd_dis->add_option("--t-nodes", dis.t_nodes, "height nodes (l2-quadrature; 0: exact)");

  PlotArgs plot;
  auto* cmd_plot = app.add_subcommand("plot", "SVG of the partition or of sqrt(N) D against M");
  add_source(cmd_plot, plot.src, true);
  cmd_plot->add_option("--kind", plot.kind, "partition or scaling")->check(CLI::IsMember({"partition", "scaling"}));
  cmd_plot->add_option("--out", plot.out, "SVG path")->required();
  cmd_plot->add_option("--M-range", plot.range, "a:b for the scaling plot");
  cmd_plot->add_option("--samples", plot.samples, "random centers per M (scaling)");
  cmd_plot->add_option("--seed", plot.seed, "seed (scaling)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*cmd_gen) return run_gen(gen);
    if (*cmd_part) return run_partition(part);
    if (*cmd_verify) return run_verify(verify);
    if (*cmd_met) return run_metrics(met);
    if (*cmd_dis) return run_discrepancy(dis);
    if (*cmd_plot) return run_plot(plot);
  } catch (const ensemble::ValidationError& e) {
    std::cerr << "invalid model (" << ensemble::to_string(e.code()) << "): " << e.what() << "\n";
    return kExitValidation;
  } catch (const io::FormatError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const metrics::SizeLimitError& e) {
    std::cerr << e.what() << " (--mode estimate)\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
