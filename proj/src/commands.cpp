#include "isostrata/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "isostrata/errors.hpp"
#include "isostrata/restriction.hpp"
#include "isostrata/search.hpp"

namespace isostrata {

namespace {

using ojson = nlohmann::ordered_json;

ojson vec_json(const Vec& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

ojson fingerprint_json(const Fingerprint& fp) {
  return ojson{{"dim", fp.dim_total},          {"dim_k", fp.dim_k},         {"dim_p", fp.dim_p},
               {"fixed_dim", fp.fixed_dim}, {"orbit_dim", fp.orbit_dim}};
}

ojson subalgebra_json(const Subalgebra& h) {
  return ojson{{"dim", h.dim_total}, {"dim_k", h.dim_k}, {"dim_p", h.dim_p}, {"theta_stable", h.theta_stable}};
}

ojson flow_json(const FlowResult& f) {
  return ojson{{"status", to_string(f.status)}, {"iterations", f.iterations}, {"f_start", f.f_start},
               {"f_limit", f.f_limit},          {"residual", f.residual},     {"collapsed", f.collapsed},
               {"limit", vec_json(f.limit)}};
}

ojson catalog_json(const StratumCatalog& cat) {
  ojson entries = ojson::array();
  for (const StratumLabel& e : cat.entries) {
    entries.push_back(ojson{{"id", e.id},
                            {"fingerprint", fingerprint_json(e.fingerprint)},
                            {"is_open", e.is_open},
                            {"is_nullcone_stratum", e.is_nullcone_stratum},
                            {"count", e.count},
                            {"fraction", cat.fractions[static_cast<size_t>(e.id)]},
                            {"rep_point", vec_json(e.rep_point)}});
  }
  int open = 0;
  for (const StratumLabel& e : cat.entries) open += e.is_open ? 1 : 0;
  const auto dense = dense_stratum(cat);
  ojson out{{"sample_count", cat.sample_count},
            {"classified", cat.classified},
            {"boundary", cat.boundary},
            {"failed", cat.failed},
            {"seed", cat.seed},
            {"open_count", open},
            {"dense_stratum", dense ? ojson(dense->id) : ojson(nullptr)},
            {"entries", entries}};
  // Rule of three: a stratum of this fraction or more is seen with 95% probability.
  out["undetected_fraction_bound"] = cat.classified > 0 ? 3.0 / cat.classified : 1.0;
  return out;
}

ojson options_json(const Options& o) {
  ojson out = ojson::object();
  for (const auto& [name, value] : o.as_map()) {
    if (name == "max_iter" || name == "starts" || name == "slice_samples") out[name] = static_cast<long long>(value);
    else if (name == "seed") out[name] = o.seed;
    else out[name] = value;
  }
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string catalog_csv(const StratumCatalog& cat, int dim) {
  std::ostringstream os;
  for (int i = 0; i < dim; ++i) os << "x" << i << ",";
  os << "label,f_limit,residual,flag\n";
  for (const SampleRecord& s : cat.samples) {
    for (Eigen::Index i = 0; i < s.coords.size(); ++i) os << format_double(s.coords(i)) << ",";
    os << s.label << "," << format_double(s.f_limit) << "," << format_double(s.residual) << "," << to_string(s.flag)
       << "\n";
  }
  return os.str();
}

StratumCatalog catalog_for(const CompatibleGroup& g, const RunConfig& cfg, const CommandParams& p) {
  if (p.samples <= 0) throw Error("--samples must be positive");
  return build_catalog(g, sample_sphere(g.dim_v(), p.samples, cfg.options.seed), cfg.options);
}

const Vec& require_at(const CommandParams& p, const CompatibleGroup& g) {
  if (!p.at) throw Error("command '" + p.command + "' needs --at");
  if (p.at->size() != g.dim_v())
    throw DimensionMismatch("--at has " + std::to_string(p.at->size()) + " coordinates, expected " +
                            std::to_string(g.dim_v()));
  return *p.at;
}

// Fills report["checks"] and returns whether all of them hold.
bool set_checks(ojson& report, const std::vector<std::pair<std::string, bool>>& checks) {
  ojson c = ojson::object();
  bool all = true;
  for (const auto& [name, ok] : checks) {
    c[name] = ok;
    all = all && ok;
  }
  report["checks"] = c;
  return all;
}

bool cmd_validate(const CompatibleGroup& g, ojson& r) {
  r["result"] = ojson{{"structure_residual", g.structure_residual()},
                      {"structure_tol", g.structure_tol()},
                      {"component_reps", g.component_reps().size()},
                      {"normalizer_reps", g.normalizer_reps().size()},
                      {"ambient_reps", g.ambient_reps().size()}};
  return set_checks(r, {{"structure", g.structure_residual() <= 2.0 * g.structure_tol()}});
}

bool cmd_flow(const CompatibleGroup& g, const RunConfig& cfg, const CommandParams& p, ojson& r) {
  const Vec& v = require_at(p, g);
  const FlowResult flow = flow_to_minimal(g, v, cfg.options);
  ojson res{{"start", vec_json(v)}, {"flow", flow_json(flow)}};
  if (flow.status == FlowStatus::Minimal) {
    const OrbitStatus os = orbit_status(g, v, cfg.options);
    res["orbit"] = ojson{{"kind", os.kind == OrbitStatus::Kind::Closed ? "closed" : "non_closed"},
                         {"in_nullcone", os.in_nullcone},
                         {"isotropy_dim_start", os.isotropy_dim_start},
                         {"isotropy_dim_limit", os.isotropy_dim_limit}};
  }
  r["result"] = res;
  return set_checks(r, {{"reached_minimal", flow.status == FlowStatus::Minimal},
                        {"nonincreasing", flow.f_limit <= flow.f_start * (1.0 + 1e-12)}});
}

bool cmd_classify(const CompatibleGroup& g, const RunConfig& cfg, const CommandParams& p, ojson& r,
                  std::string& csv) {
  const Vec& v = require_at(p, g);
  const StratumCatalog cat = catalog_for(g, cfg, p);
  const PointClass pc = classify_point(g, v, cfg.options);
  const int label =
      pc.boundary_ambiguous ? -1 : match_label(g, cat, pc.isotropy, cfg.options, derive_seed(cfg.options.seed, 0));
  r["result"] = ojson{{"point", vec_json(v)},
                      {"flow", flow_json(pc.flow)},
                      {"isotropy", subalgebra_json(pc.isotropy)},
                      {"fingerprint", fingerprint_json(pc.fingerprint)},
                      {"in_nullcone", pc.in_nullcone},
                      {"boundary_ambiguous", pc.boundary_ambiguous},
                      {"label", label},
                      {"catalog", catalog_json(cat)}};
  csv = catalog_csv(cat, g.dim_v());
  return set_checks(r, {{"theta_stable", pc.isotropy.theta_stable}});
}

bool cmd_stratify(const CompatibleGroup& g, const RunConfig& cfg, const CommandParams& p, ojson& r,
                  std::string& csv) {
  const StratumCatalog cat = catalog_for(g, cfg, p);
  double total = 0.0;
  for (double f : cat.fractions) total += f;
  bool labelled = true;
  for (const SampleRecord& s : cat.samples)
    labelled = labelled && ((s.flag == SampleFlag::Ok) == (s.label >= 0));
  r["result"] = catalog_json(cat);
  csv = catalog_csv(cat, g.dim_v());
  return set_checks(r, {{"fractions_sum_to_one", cat.classified == 0 || std::abs(total - 1.0) < 1e-12},
                        {"one_label_per_sample", labelled}});
}

bool cmd_split(const CompatibleGroup& g, const RunConfig& cfg, const CommandParams& p, ojson& r) {
  const Vec& v = require_at(p, g);
  const SplittingResult s = splitting_number(g, v, cfg.options);
  ojson counted = ojson::array();
  for (int id : s.counted) counted.push_back(id);
  r["result"] = ojson{{"point", vec_json(v)},
                      {"base", vec_json(s.base)},
                      {"slice_dim", s.slice_dim},
                      {"splitting_number", s.n},
                      {"counted", counted},
                      {"evidence", catalog_json(s.evidence)}};
  return set_checks(r, {{"positive", s.n >= 1}});
}

bool cmd_restrict(const CompatibleGroup& g, const RunConfig& cfg, const CommandParams& p, ojson& r,
                  std::string& csv) {
  const StratumCatalog cat = catalog_for(g, cfg, p);
  RestrictionParams rp;
  rp.fiber_count = p.fibers;
  rp.stratum = p.stratum;
  const RestrictionReport rep = run_restriction(g, cat, cfg.options, rp);

  ojson sheets = ojson::array();
  for (const Sheet& s : rep.context.sheets)
    sheets.push_back(ojson{{"stratum", s.stratum_id},
                           {"h", subalgebra_json(s.h)},
                           {"fingerprint", fingerprint_json(s.fingerprint)},
                           {"normalizer", subalgebra_json(s.normalizer)},
                           {"discrete_normalizer_reps", s.normalizer_cosets.size() - 1}});
  ojson allowed = ojson::array();
  for (int id : rep.context.allowed) allowed.push_back(id);

  const ZeroFiberRecord& z = rep.zero_fiber;
  ojson transports = ojson::array();
  for (const TransportRecord& t : rep.surjectivity.points) {
    ojson tj{{"point", vec_json(t.point)}, {"skipped", t.skipped}};
    if (!t.skipped) {
      tj["success"] = t.success;
      tj["sheet"] = t.sheet;
      tj["witness"] = ojson{{"k_coords", vec_json(t.witness.coords)}, {"component", t.witness.coset}};
      tj["residual"] = t.residual;
      tj["norm_error"] = t.norm_error;
    }
    transports.push_back(tj);
  }
  ojson fibers = ojson::array();
  bool budget = false;
  for (const FiberRecord& f : rep.fibers) {
    fibers.push_back(ojson{{"point", vec_json(f.point)},
                           {"fiber_count", f.count},
                           {"splitting_number", f.splitting},
                           {"not_open", f.not_open},
                           {"lower_bound_only", f.budget_exhausted},
                           {"agrees", f.agrees}});
    budget = budget || f.budget_exhausted;
  }

  bool fibers_ok = true;
  for (const FiberRecord& f : rep.fibers) fibers_ok = fibers_ok && f.agrees;
  r["result"] = ojson{
      {"mode", to_string(rep.context.mode)},
      {"allowed_strata", allowed},
      {"sheets", sheets},
      {"xh", ojson{{"samples", rep.xh_samples.size()},
                   {"accepted_fraction", rep.xh_accepted_fraction},
                   {"rejections", rep.xh_rejections}}},
      {"mnp", ojson{{"points", rep.mnp_points.size()},
                    {"max_gradient", rep.mnp_max_gradient},
                    {"max_isotropy_distance", rep.mnp_max_isotropy_distance}}},
      {"zero_fiber", ojson{{"checked", z.checked},
                           {"in_mnp", z.in_mnp},
                           {"in_mp", z.in_mp},
                           {"forward_failures", z.forward_failures},
                           {"backward_failures", z.backward_failures},
                           {"max_mp_given_mnp", z.max_mp_given_mnp},
                           {"max_mnp_given_mp", z.max_mnp_given_mp},
                           {"passed", z.passed()}}},
      {"surjectivity", ojson{{"successes", rep.surjectivity.successes},
                             {"failures", rep.surjectivity.failures},
                             {"skipped", rep.surjectivity.skipped},
                             {"max_residual", rep.surjectivity.max_residual},
                             {"passed", rep.surjectivity.passed()},
                             {"points", transports}}},
      {"fibers", fibers},
      {"search_budget_exhausted", budget},
      {"catalog", catalog_json(cat)}};
  csv = catalog_csv(cat, g.dim_v());
  return set_checks(r, {{"zero_fiber_lemma", z.passed()},
                        {"surjectivity_lemma", rep.surjectivity.passed()},
                        {"fiber_counts_match_splitting", fibers_ok},
                        {"restricted_minimal_vectors", rep.mnp_passed}});
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate", "flow", "classify", "stratify", "split", "restrict"};
  return names;
}

Vec parse_point(const std::string& text, int dim) {
  if (text == "origin") return Vec::Zero(dim);
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ParseError("at", "not a number: '" + item + "'");
    }
  }
  if (static_cast<int>(vals.size()) != dim)
    throw ParseError("at", "has " + std::to_string(vals.size()) + " coordinates, expected " + std::to_string(dim));
  return Eigen::Map<const Vec>(vals.data(), dim);
}

CommandResult run_command(const RunConfig& cfg, const CommandParams& params) {
  CommandResult out;
  ojson& r = out.report;
  r["command"] = params.command;
  r["source"] = cfg.source;
  r["group"] = cfg.description.name;
  r["seed"] = cfg.options.seed;
  r["samples"] = params.samples;
  r["options"] = options_json(cfg.options);
  try {
    const CompatibleGroup g = build_group(cfg.description);
    r["dims"] = ojson{{"v", g.dim_v()}, {"k", g.dim_k()}, {"p", g.dim_p()}};
    bool ok = false;
    if (params.command == "validate") ok = cmd_validate(g, r);
    else if (params.command == "flow") ok = cmd_flow(g, cfg, params, r);
    else if (params.command == "classify") ok = cmd_classify(g, cfg, params, r, out.csv);
    else if (params.command == "stratify") ok = cmd_stratify(g, cfg, params, r, out.csv);
    else if (params.command == "split") ok = cmd_split(g, cfg, params, r);
    else if (params.command == "restrict") ok = cmd_restrict(g, cfg, params, r, out.csv);
    else throw Error("unknown command '" + params.command + "'");
    out.exit_code = ok ? 0 : 1;
  } catch (const std::exception& e) {
    r["error"] = e.what();
    out.exit_code = 2;
  }
  r["exit_code"] = out.exit_code;
  return out;
}

void write_outputs(const CommandResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream(std::filesystem::path(dir) / "report.json") << result.report.dump(2) << "\n";
  if (!result.csv.empty()) std::ofstream(std::filesystem::path(dir) / "samples.csv") << result.csv;
}

}  // namespace isostrata
