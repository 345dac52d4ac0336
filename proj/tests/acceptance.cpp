// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero
// if any fails. Usage: acceptance <isostrata binary> <scratch dir>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "isostrata/builtins.hpp"
#include "isostrata/restriction.hpp"
#include "isostrata/search.hpp"

using namespace isostrata;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string g_cli;
fs::path g_scratch;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct CliRun {
  int exit_code = -1;
  double seconds = 0.0;
  fs::path dir;
  json report;
};

CliRun run_cli(const std::string& args, const std::string& tag) {
  CliRun r;
  r.dir = g_scratch / tag;
  fs::remove_all(r.dir);
  const std::string cmd = "'" + g_cli + "' " + args + " --out '" + r.dir.string() + "' > '" +
                          (g_scratch / (tag + ".log")).string() + "' 2>&1";
  const auto t0 = std::chrono::steady_clock::now();
  const int status = std::system(cmd.c_str());
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(r.dir / "report.json");
  if (in) r.report = json::parse(in, nullptr, false);
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string point_arg(const Vec& v) {
  std::string s;
  char buf[64];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.17g", i ? "," : "", v(i));
    s += buf;
  }
  return s;
}

CompatibleGroup builtin(const std::string& name) { return build_group(builtin_description(name)); }

Vec gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

Mat random_k(const CompatibleGroup& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(-M_PI, M_PI);
  Vec x(g.dim_k());
  for (int i = 0; i < g.dim_k(); ++i) x(i) = a(rng);
  const auto cosets = g.cosets();
  std::uniform_int_distribution<size_t> c(0, cosets.size() - 1);
  return cosets[c(rng)] * g.k_exp(x);
}

Mat random_g(const CompatibleGroup& g, std::mt19937_64& rng) {
  const AlgebraElement ap{Vec::Zero(g.dim_k()), 0.7 * gaussian(g.dim_p(), rng)};
  return random_k(g, rng) * linalg::expm(g.realize(ap));
}

// sign(|v1| - |v2|) on the so(2,2) model.
int ray_sign(const Vec& v) { return v.head(2).norm() > v.tail(2).norm() ? 1 : -1; }

std::vector<std::string> groups_with_p() {
  std::vector<std::string> out;
  for (const std::string& n : builtin_names())
    if (builtin(n).dim_p() > 0) out.push_back(n);
  return out;
}

StratumCatalog catalog(const CompatibleGroup& g, const Options& o, int n = 1000) {
  return build_catalog(g, sample_sphere(g.dim_v(), n, o.seed), o);
}

void c1(Outcome& out) {
  const CliRun r = run_cli("stratify --builtin so22 --samples 2000 --seed 42", "c1");
  out.require(r.exit_code == 0, "exit code " + std::to_string(r.exit_code));
  out.require(r.seconds < 60.0, "runtime");
  if (!r.report.is_object()) return out.require(false, "no report");
  const json& res = r.report["result"];
  int open = 0, nullcone = 0;
  std::vector<int> sign_of(res["entries"].size(), 0);
  for (const json& e : res["entries"]) {
    const int id = e["id"].get<int>();
    if (e["is_nullcone_stratum"].get<bool>()) ++nullcone;
    if (e["is_open"].get<bool>()) {
      ++open;
      sign_of[static_cast<size_t>(id)] = ray_sign(Eigen::Map<const Vec>(e["rep_point"].get<std::vector<double>>().data(), 4));
    }
  }
  out.require(open == 2 && nullcone == 1 && res["entries"].size() == 3, "stratum count");

  std::istringstream csv(slurp(r.dir / "samples.csv"));
  std::string line;
  std::getline(csv, line);
  int rows = 0, boundary = 0, disagree = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) f.push_back(c);
    if (f.size() != 8) return out.require(false, "csv row shape");
    ++rows;
    if (f[7] == "boundary") {
      ++boundary;
      continue;
    }
    Vec v(4);
    for (int i = 0; i < 4; ++i) v(i) = std::stod(f[static_cast<size_t>(i)]);
    const int label = std::stoi(f[4]);
    if (f[7] != "ok" || label < 0 || sign_of[static_cast<size_t>(label)] != ray_sign(v)) ++disagree;
  }
  out.require(rows == 2000, "row count");
  out.require(disagree == 0, std::to_string(disagree) + " labels disagree with the norm test");
  out.require(boundary < 20, "boundary fraction");
  out.detail << " open=" << open << " nullcone=" << nullcone << " disagree=" << disagree << " boundary=" << boundary
             << " time=" << r.seconds << "s";
}

void c2(Outcome& out) {
  double total = 0.0;
  const CliRun r = run_cli("split --builtin so22 --at origin", "c2_origin");
  total += r.seconds;
  const int n0 = r.report.is_object() ? r.report["result"]["splitting_number"].get<int>() : -1;
  out.require(r.exit_code == 0 && n0 == 2, "n(origin) = " + std::to_string(n0));

  std::mt19937_64 rng(2);
  int per_sign[2] = {0, 0}, ones = 0, runs = 0;
  while (per_sign[0] < 20 || per_sign[1] < 20) {
    const Vec v = gaussian(4, rng);
    int& c = per_sign[ray_sign(v) > 0 ? 0 : 1];
    if (c >= 20) continue;
    ++c;
    const CliRun p = run_cli("split --builtin so22 --at " + point_arg(v), "c2_point");
    total += p.seconds;
    ++runs;
    if (p.exit_code == 0 && p.report["result"]["splitting_number"].get<int>() == 1) ++ones;
  }
  out.require(ones == runs, std::to_string(runs - ones) + " interior points with n != 1");
  out.require(total < 120.0, "runtime");
  out.detail << " n(origin)=" << n0 << " interior n=1 at " << ones << "/" << runs << " time=" << total << "s";
}

void c3(Outcome& out) {
  const CliRun r = run_cli("restrict --builtin so22 --seed 42 --fibers 20", "c3");
  out.require(r.exit_code == 0, "exit code " + std::to_string(r.exit_code));
  if (!r.report.is_object()) return out.require(false, "no report");
  const json& res = r.report["result"];
  int origin_count = -1, interior_ones = 0, interior = 0;
  bool origin_flag = false;
  for (const json& f : res["fibers"]) {
    double norm = 0.0;
    for (double x : f["point"].get<std::vector<double>>()) norm += x * x;
    if (norm == 0.0) {
      origin_count = f["fiber_count"].get<int>();
      origin_flag = f["not_open"].get<bool>();
      continue;
    }
    ++interior;
    if (f["fiber_count"].get<int>() == 1 && !f["not_open"].get<bool>() && f["agrees"].get<bool>()) ++interior_ones;
  }
  out.require(origin_count == 2 && origin_flag, "origin fiber");
  out.require(interior >= 20 && interior_ones == interior, "interior fibers");
  const json& z = res["zero_fiber"];
  out.require(z["checked"].get<int>() >= 50 && z["passed"].get<bool>(), "zero-fiber lemma");
  out.require(z["max_mp_given_mnp"].get<double>() < 1e-6 && z["max_mnp_given_mp"].get<double>() < 1e-6,
              "zero-fiber residuals");
  const json& s = res["surjectivity"];
  out.require(s["successes"].get<int>() >= 50 && s["passed"].get<bool>(), "surjectivity lemma");
  out.require(s["max_residual"].get<double>() < 1e-6, "surjectivity residual");
  out.detail << " origin count=" << origin_count << " not_open=" << origin_flag << " interior count 1 at "
             << interior_ones << "/" << interior << " zero-fiber checked=" << z["checked"]
             << " surjectivity " << s["successes"] << " ok, max residual " << s["max_residual"];
}

void c4(Outcome& out) {
  const CompatibleGroup g = builtin("sl2c-adjoint");
  const Options o;
  const StratumCatalog cat = catalog(g, o);
  int open = 0;
  for (const StratumLabel& e : cat.entries) open += e.is_open;
  out.require(open == 1 && dense_stratum(cat).has_value(), "dense stratum");
  const RestrictionContext ctx = prepare_restriction(g, cat, o);
  const auto points = minimal_vectors_in(g, cat, ctx.allowed, 100, 0x4c4, o);
  int ones = 0;
  for (const Vec& m : points) {
    const FiberRecord f = phi_fiber_count(g, ctx, cat, m, o);
    ones += f.count == 1 && f.agrees;
  }
  out.require(points.size() == 100 && ones == 100, std::to_string(ones) + " fibers of size 1");
  out.detail << " open strata=" << open << " fibers of size 1: " << ones << "/" << points.size();
}

void c5(Outcome& out) {
  const CompatibleGroup g = builtin("sl2r-adjoint");
  const Options o;
  const StratumCatalog cat = catalog(g, o);
  int split = -1, compact = -1, open = 0;
  for (const StratumLabel& e : cat.entries) {
    if (!e.is_open) continue;
    ++open;
    const Fingerprint& f = e.fingerprint;
    if (f.dim_total == 1 && f.dim_k == 0 && f.dim_p == 1) split = e.id;
    if (f.dim_total == 1 && f.dim_k == 1 && f.dim_p == 0) compact = e.id;
  }
  out.require(open == 2 && split >= 0 && compact >= 0, "open strata fingerprints");
  if (split < 0) return;
  const RestrictionContext ctx = prepare_restriction(g, cat, o, split);
  out.require(ctx.mode == RestrictionContext::Mode::Closure, "closure mode");

  std::vector<Vec> points = minimal_vectors_in(g, cat, {split}, 100, 0x5c5, o);
  out.require(points.size() == 100, "minimal vectors");
  std::sort(points.begin(), points.end(), [](const Vec& a, const Vec& b) { return a.norm() < b.norm(); });
  bool monotone = true, nonneg = true;
  double prev = -1.0;
  for (const Vec& m : points) {
    const double q = -sl2_matrix(m).determinant();
    nonneg = nonneg && q >= 0.0;
    // On the split Cartan line the invariant is |m|^2 / 2.
    monotone = monotone && q > prev && std::abs(q - 0.5 * m.squaredNorm()) <= 1e-9 * (1.0 + m.squaredNorm());
    prev = q;
  }
  out.require(nonneg, "-det nonnegative");
  out.require(monotone, "-det injective and monotone");

  points.insert(points.begin(), Vec::Zero(3));
  int ones = 0;
  for (const Vec& m : points) {
    const FiberRecord f = phi_fiber_count(g, ctx, cat, m, o);
    ones += f.count == 1 && f.agrees;
  }
  out.require(ones == static_cast<int>(points.size()), "fiber counts");
  out.detail << " split stratum " << split << ", compact stratum " << compact << "; -det monotone over "
             << points.size() - 1 << " minimal vectors; fibers of size 1: " << ones << "/" << points.size();
}

void c6(Outcome& out) {
  const auto names = groups_with_p();
  std::mt19937_64 rng(6);
  double worst = 0.0;
  int bad = 0;
  for (int t = 0; t < 50; ++t) {
    const CompatibleGroup g = builtin(names[static_cast<size_t>(t) % names.size()]);
    const Vec c = gaussian(g.dim_p(), rng);
    const Mat xi = g.realize(AlgebraElement{Vec::Zero(g.dim_k()), c});
    const Vec v = gaussian(g.dim_v(), rng);
    const double h = 1e-5;
    const double fd = (value_f(linalg::expm(h * xi) * v) - value_f(linalg::expm(-h * xi) * v)) / (2 * h);
    const double err = std::abs(gradient_map(g, v).dot(c) - fd) / (1.0 + value_f(v));
    worst = std::max(worst, err);
    bad += err > 1e-6;
  }
  out.require(bad == 0, std::to_string(bad) + " triples off");
  out.detail << " worst relative error " << worst;
}

void c7(Outcome& out) {
  const auto names = groups_with_p();
  std::mt19937_64 rng(7);
  const Options o;
  double worst_second = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100; ++t) {
    const CompatibleGroup g = builtin(names[static_cast<size_t>(t) % names.size()]);
    const Vec c = gaussian(g.dim_p(), rng).normalized();
    const Mat xi = g.realize(AlgebraElement{Vec::Zero(g.dim_k()), c});
    const Vec v = gaussian(g.dim_v(), rng);
    const double h = 0.1;
    auto f = [&](double s) { return value_f(linalg::expm(s * xi) * v); };
    for (double s = -1.0; s <= 1.0 + 1e-12; s += h)
      worst_second = std::min(worst_second, f(s + h) - 2 * f(s) + f(s - h));
  }
  out.require(worst_second >= -1e-9, "second differences");

  int increases = 0;
  for (int t = 0; t < 20; ++t) {
    const CompatibleGroup g = builtin(builtin_names()[static_cast<size_t>(t) % builtin_names().size()]);
    const Vec v = gaussian(g.dim_v(), rng);
    const FlowResult full = flow_to_minimal(g, v, o);
    double prev = value_f(v);
    for (int j = 1; j <= std::min(full.iterations, 200); ++j) {
      Options capped = o;
      capped.max_iter = j;
      const double fj = flow_to_minimal(g, v, capped).f_limit;
      increases += fj > prev;
      prev = fj;
    }
    increases += full.f_limit > prev;
  }
  out.require(increases == 0, "flow increased f");

  double worst_transport = 0.0;
  for (const std::string& name : builtin_names()) {
    const CompatibleGroup g = builtin(name);
    const auto cosets = g.cosets();
    const Vec v = gaussian(g.dim_v(), rng);
    const Vec m0 = flow_to_minimal(g, v, o).limit;
    for (int i = 0; i < 5; ++i) {
      const Vec m1 = flow_to_minimal(g, Vec(random_k(g, rng) * v), o).limit;
      auto objective = [&](const Vec& x, int cs) {
        return (cosets[static_cast<size_t>(cs)] * g.k_exp(x) * m1 - m0).squaredNorm();
      };
      KSearchOptions ko;
      ko.stop_below = 1e-16;
      const KCandidate best = best_candidate(multi_start_k(g, static_cast<int>(cosets.size()), objective, ko));
      worst_transport = std::max(worst_transport, std::sqrt(best.value));
    }
  }
  out.require(worst_transport < 1e-6, "K-translates");
  out.detail << " min second difference " << worst_second << ", flow increases " << increases
             << ", max transport distance " << worst_transport;
}

void c8(Outcome& out) {
  const Options o;
  const auto& names = builtin_names();
  std::vector<CompatibleGroup> groups;
  std::vector<StratumCatalog> cats;
  for (const std::string& n : names) {
    groups.push_back(builtin(n));
    cats.push_back(catalog(groups.back(), o));
  }
  std::mt19937_64 rng(8);
  int checked = 0, boundary = 0, mismatches = 0;
  std::uint64_t seed = 0;
  for (int t = 0; t < 200; ++t) {
    const size_t gi = static_cast<size_t>(t) % names.size();
    const CompatibleGroup& g = groups[gi];
    auto label = [&](const Vec& y) -> int {
      const PointClass pc = classify_point(g, y, o);
      if (pc.boundary_ambiguous) return -2;
      return match_label(g, cats[gi], pc.isotropy, o, derive_seed(o.seed, ++seed));
    };
    const Vec v = gaussian(g.dim_v(), rng);
    const int l0 = label(v);
    if (l0 == -2) {
      ++boundary;
      continue;
    }
    ++checked;
    bool ok = l0 >= 0;
    for (double s : {0.5, 2.0}) ok = ok && label(s * v) == l0;
    for (int i = 0; i < 10; ++i) ok = ok && label(random_g(g, rng) * v) == l0;
    mismatches += !ok;
  }
  out.require(mismatches == 0, std::to_string(mismatches) + " points change label");
  out.require(checked >= 198, "too many boundary points");
  out.detail << " points " << checked << " (boundary " << boundary << "), label changes " << mismatches;
}

void c9(Outcome& out) {
  const std::vector<std::pair<std::string, std::string>> commands{
      {"validate --builtin so22", "c9_validate"},
      {"flow --builtin so22 --at 1,0.5,0.2,0.1", "c9_flow"},
      {"classify --builtin so22 --samples 500 --at 1,0.5,0.2,0.1", "c9_classify"},
      {"stratify --builtin so22 --samples 2000 --seed 42", "c1"},
      {"split --builtin so22 --at origin", "c2_origin"},
      {"restrict --builtin so22 --seed 42 --fibers 20", "c3"},
      {"restrict --builtin sl2r-adjoint --samples 500 --fibers 5", "c9_restrict_sl2r"},
  };
  int differing = 0;
  for (const auto& [args, tag] : commands) {
    if (!fs::exists(g_scratch / tag / "report.json")) run_cli(args, tag);
    run_cli(args, tag + "_again");
    for (const char* file : {"report.json", "samples.csv"}) {
      const fs::path a = g_scratch / tag / file, b = g_scratch / (tag + "_again") / file;
      if (fs::exists(a) != fs::exists(b) || (fs::exists(a) && slurp(a) != slurp(b))) {
        ++differing;
        out.detail << " " << tag << "/" << file << " differs;";
      }
    }
  }
  out.require(differing == 0, "reports differ");
  out.detail << " " << commands.size() << " commands compared";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <isostrata binary> <scratch dir>\n";
    return 2;
  }
  g_cli = argv[1];
  g_scratch = argv[2];
  fs::create_directories(g_scratch);

  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"so22 strata", c1},
      {"so22 splitting numbers", c2},
      {"restriction fiber law", c3},
      {"sl2c dense stratum and bijective fibers", c4},
      {"sl2r split Cartan quotient", c5},
      {"gradient map finite differences", c6},
      {"convexity, descent and K-equivariance", c7},
      {"label invariance", c8},
      {"determinism", c9},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !out.pass;
    std::cout << "criterion " << i + 1 << " " << (out.pass ? "PASS" : "FAIL") << ": " << criteria[i].first << ";"
              << out.detail.str() << " (" << secs << "s)" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
