#include "sampdisc/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "sampdisc/parallel.hpp"
#include "sampdisc/random.hpp"

#ifndef SAMPDISC_VERSION
#define SAMPDISC_VERSION "0.0.0"
#endif

namespace sampdisc {

const char* toolkit_version() { return SAMPDISC_VERSION; }

namespace {

const std::set<std::string> kKinds = {"certify",   "nikolskii",     "generate",       "subsample",
                                      "recover",   "study-scaling", "study-lacunary", "study-tensor"};

[[noreturn]] void config_fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::config_error, path + ": " + what);
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    config_fail(key, e.what());
  }
}

bool random_mode(const std::string& mode) { return mode == "iid" || mode == "leverage"; }

// ------------------------------------------------------------------ options

NormOptions norm_options(const ExperimentConfig& c) {
  NormOptions o;
  for (const auto& [key, v] : c.tolerances) {
    if (key == "refine_tolerance") o.refine_tolerance = v;
    else if (key == "minimax_tolerance") o.minimax_tolerance = v;
    else if (key == "optimality_tolerance") o.solver.optimality_tolerance = v;
    else if (key == "residual_floor") o.solver.residual_floor = v;
    else if (key == "sup_grid_factor") o.sup_grid_factor = static_cast<int>(v);
    else if (key == "best_approx_grid") o.best_approx_grid = static_cast<int>(v);
    else if (key == "initial_grid") o.initial_grid = static_cast<int>(v);
    else if (key == "general_p_density") o.quadrature.general_p_density = static_cast<int>(v);
    else if (key == "max_quadrature_nodes") o.quadrature.max_nodes = static_cast<std::size_t>(v);
  }
  return o;
}

CertifyBudget certify_budget(const ExperimentConfig& c) {
  CertifyBudget b;
  b.restarts = c.restarts;
  b.max_iterations = c.max_iterations;
  b.quadrature = norm_options(c).quadrature;
  if (c.seed) b.seed = derive_stream(*c.seed, 0);
  return b;
}

// ------------------------------------------------------------------- points

struct SampleSet {
  PointSet points;
  std::optional<std::vector<double>> weights;
};

SampleSet sample_set(const ExperimentConfig& c, const Subspace& space) {
  SampleSet s;
  if (!c.points.is_null()) {
    s.points = point_set_from_json(c.points, "points");
    for (const auto& x : s.points.points) space.domain().check_point(x);
  } else {
    GenerateRequest req;
    req.mode = generation_mode_from_string(c.mode);
    req.m = c.m;
    req.factor_sizes = c.factor_sizes;
    req.factor_mode = generation_mode_from_string(c.factor_mode);
    req.seed = c.seed;
    auto generated = generate_points(space, req);
    if (auto* w = std::get_if<WeightedPointSet>(&generated)) {
      s.points = w->points;
      s.weights = w->weights;
    } else {
      s.points = std::get<PointSet>(generated);
    }
  }
  if (!c.weights.empty()) {
    if (c.weights.size() != s.points.size()) config_fail("weights", "one weight per point required");
    s.weights = c.weights;
  }
  return s;
}

WeightedPointSet weighted(const SampleSet& s) {
  if (s.weights) return WeightedPointSet(s.points, *s.weights);
  return WeightedPointSet::uniform(s.points);
}

TargetFunction target_function(const Json& t, const Subspace& space) {
  if (!t.is_object()) config_fail("target", "missing target description");
  if (t.contains("values")) {
    std::vector<Complex> values;
    const Json& list = t["values"];
    if (!list.is_array()) config_fail("target.values", "must be an array");
    for (const auto& v : list) {
      if (v.is_number()) values.emplace_back(v.get<double>(), 0.0);
      else if (v.is_array() && v.size() == 2) values.emplace_back(v[0].get<double>(), v[1].get<double>());
      else config_fail("target.values", "entries must be numbers or [re, im]");
    }
    if (space.is_torus() || values.size() != space.domain().size())
      config_fail("target.values", "value targets need a finite-set space with one value per point");
    return [values](const Point& x) { return values.at(static_cast<std::size_t>(x.at(0))); };
  }
  if (!t.contains("terms") || !t["terms"].is_array() || t["terms"].empty())
    config_fail("target.terms", "must be a nonempty array");
  check(space.is_torus(), ErrorCode::config_error, "target.terms: trigonometric targets need a torus space");
  const int d = space.domain().dimension();
  std::vector<std::pair<Frequency, Complex>> terms;
  for (std::size_t i = 0; i < t["terms"].size(); ++i) {
    const Json& term = t["terms"][i];
    const std::string path = "target.terms[" + std::to_string(i) + "]";
    if (!term.is_object() || !term.contains("k") || !term.contains("c")) config_fail(path, "needs k and c");
    Frequency k = term["k"].is_number_integer() ? Frequency{term["k"].get<int>()} : term["k"].get<Frequency>();
    if (static_cast<int>(k.size()) != d) config_fail(path + ".k", "length differs from the dimension");
    const Json& c = term["c"];
    Complex z = c.is_number() ? Complex(c.get<double>(), 0.0) : Complex(c.at(0).get<double>(), c.at(1).get<double>());
    terms.emplace_back(std::move(k), z);
  }
  return [terms](const Point& x) {
    Complex s = 0.0;
    for (const auto& [k, c] : terms) {
      double phase = 0.0;
      for (std::size_t i = 0; i < k.size(); ++i) phase += k[i] * x[i];
      s += c * std::polar(1.0, phase);
    }
    return s;
  };
}

// ------------------------------------------------------------------ helpers

std::string fixed(double v, int digits = 6) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

std::string cert_row(const std::string& label, const Certificate& c) {
  std::ostringstream s;
  s << std::left << std::setw(14) << label << " m=" << std::setw(6) << c.m << " c1=" << std::setw(12)
    << fixed(c.c1_pow, 10) << " c2=" << std::setw(12) << fixed(c.c2_pow, 10) << " " << to_string(c.method) << " / "
    << to_string(c.status) << "\n";
  return s.str();
}

std::string cert_csv_header() { return "label,p,m,c1_pow,c2_pow,method,status,tolerance\n"; }

std::string cert_csv_row(const std::string& label, const Certificate& c) {
  return label + "," + csv_number(c.p) + "," + std::to_string(c.m) + "," + csv_number(c.c1_pow) + "," +
         csv_number(c.c2_pow) + "," + to_string(c.method) + "," + to_string(c.status) + "," +
         csv_number(c.tolerance) + "\n";
}

void log_event(std::ostream* log, const Json& event) {
  if (log) *log << event.dump() << "\n";
}

// ------------------------------------------------------------------- kinds

void run_certify(const ExperimentConfig& c, Report& r) {
  const Subspace space = space_from_json(c.space);
  const SampleSet s = sample_set(c, space);
  const CertifyBudget budget = certify_budget(c);
  const Certificate cert =
      s.weights ? certify(space, weighted(s), c.p, budget) : certify(space, s.points, c.p, budget);
  Json rec = {{"points", point_set_to_json(s.points)}, {"certificate", certificate_to_json(cert)}};
  if (s.weights) rec["weights"] = *s.weights;
  if (s.points.provenance.seed) rec["stream"] = *s.points.provenance.seed;
  r.json["records"].push_back(rec);
  r.json["summary"] = {{"c1_pow", cert.c1_pow}, {"c2_pow", cert.c2_pow}, {"status", to_string(cert.status)}};
  r.series_csv = cert_csv_header() + cert_csv_row("sample", cert);
  r.summary = cert_row("certificate", cert);
}

void run_nikolskii(const ExperimentConfig& c, Report& r) {
  const Subspace space = space_from_json(c.space);
  const NikolskiiEstimate e = nikolskii_constant(space, c.q, norm_options(c));
  r.json["records"].push_back({{"N", space.size()}, {"estimate", nikolskii_to_json(e)}});
  r.json["summary"] = {{"M", e.M}, {"B", e.B}};
  r.series_csv = "N,q,M,B,method,grid_size\n" + std::to_string(space.size()) + "," + csv_number(e.q) + "," +
                 csv_number(e.M) + "," + csv_number(e.B) + "," + to_string(e.method) + "," +
                 std::to_string(e.grid_size) + "\n";
  r.summary = "N=" + std::to_string(space.size()) + " q=" + fixed(e.q) + " M=" + fixed(e.M, 12) +
              " B=" + fixed(e.B, 12) + " (" + to_string(e.method) + ")\n";
}

void run_generate(const ExperimentConfig& c, Report& r) {
  const Subspace space = space_from_json(c.space);
  const SampleSet s = sample_set(c, space);
  Json rec = s.weights ? weighted_point_set_to_json(WeightedPointSet(s.points, *s.weights))
                       : point_set_to_json(s.points);
  if (s.points.provenance.seed) rec["stream"] = *s.points.provenance.seed;
  r.json["records"].push_back(rec);
  r.json["summary"] = {{"m", s.points.size()}};
  std::ostringstream csv;
  csv << "index";
  const std::size_t dims = s.points.points.empty() ? 0 : s.points.points[0].size();
  for (std::size_t i = 0; i < dims; ++i) csv << ",x" << (i + 1);
  if (s.weights) csv << ",weight";
  csv << "\n";
  for (std::size_t j = 0; j < s.points.size(); ++j) {
    csv << j;
    for (double v : s.points.points[j]) csv << "," << csv_number(v);
    if (s.weights) csv << "," << csv_number((*s.weights)[j]);
    csv << "\n";
  }
  r.series_csv = csv.str();
  r.summary = "generated " + std::to_string(s.points.size()) + " points (" + c.mode + ")\n";
}

void run_subsample(const ExperimentConfig& c, Report& r) {
  const Subspace space = space_from_json(c.space);
  const double N = static_cast<double>(space.size());
  TwoStageBudget budgets{c.stage1_size, c.stage2_size, c.retries};
  const double B = nikolskii_constant(space, c.q, norm_options(c)).B;
  if (budgets.stage1_size == 0)
    budgets.stage1_size = static_cast<std::size_t>(std::ceil(budgets::stage1(B, c.q, c.eps, std::max(N, 2.0))));
  if (budgets.stage2_size == 0)
    budgets.stage2_size = std::min(budgets.stage1_size,
                                   static_cast<std::size_t>(std::ceil(budgets::nikolskii_bound(B, c.q, N))));
  budgets.stage1_size = std::max(budgets.stage1_size, budgets.stage2_size);

  TwoStageResult result;
  try {
    result = two_stage_subsample(space, c.q, c.eps, budgets, *c.seed, certify_budget(c));
  } catch (const BudgetExhausted& e) {
    result = e.best();
    r.status = "budget-exhausted";
    r.json["error"] = e.what();
  }
  Json rec = {{"stage1_size", budgets.stage1_size},
              {"stage2_size", budgets.stage2_size},
              {"retries", budgets.retries},
              {"attempts", result.attempts},
              {"stage1_stream", derive_stream(*c.seed, 1)},
              {"stage1_certificate", certificate_to_json(result.stage1_certificate)},
              {"points", point_set_to_json(result.points)},
              {"certificate", certificate_to_json(result.certificate)},
              {"restricted_certificate", certificate_to_json(result.restricted_certificate)}};
  if (result.points.provenance.seed) rec["stream"] = *result.points.provenance.seed;
  r.json["records"].push_back(rec);
  r.json["summary"] = {{"attempts", result.attempts}, {"c1_pow", result.certificate.c1_pow},
                       {"c2_pow", result.certificate.c2_pow}};
  r.series_csv = cert_csv_header() + cert_csv_row("stage1", result.stage1_certificate) +
                 cert_csv_row("subset", result.certificate) +
                 cert_csv_row("restricted", result.restricted_certificate);
  r.summary = cert_row("stage 1", result.stage1_certificate) + cert_row("subset", result.certificate) +
              cert_row("restricted", result.restricted_certificate) + "attempts: " +
              std::to_string(result.attempts) + "\n";
}

void run_recover(const ExperimentConfig& c, Report& r) {
  const Subspace space = space_from_json(c.space);
  const SampleSet s = sample_set(c, space);
  const TargetFunction f = target_function(c.target, space);
  RecoveryOptions options;
  options.norm_options = norm_options(c);
  options.certify_budget = certify_budget(c);
  if (auto it = c.tolerances.find("slack"); it != c.tolerances.end()) options.slack = it->second;
  const RecoveryBoundReport rep = verify_recovery(f, space, weighted(s), c.p, options);
  Json rec = {{"points", point_set_to_json(s.points)}, {"report", recovery_report_to_json(rep)}};
  if (s.points.provenance.seed) rec["stream"] = *s.points.provenance.seed;
  r.json["records"].push_back(rec);
  r.json["summary"] = {{"lhs", rep.lhs}, {"rhs", rep.rhs}, {"holds", rep.holds}, {"advisory", rep.advisory}};
  r.series_csv = "p,lhs,rhs,bound_constant,d_inf,slack,holds\n" + csv_number(rep.p) + "," + csv_number(rep.lhs) +
                 "," + csv_number(rep.rhs) + "," + csv_number(rep.bound_constant) + "," + csv_number(rep.d_inf) +
                 "," + csv_number(rep.slack) + "," + (rep.holds ? "true" : "false") + "\n";
  r.summary = "lhs=" + fixed(rep.lhs, 10) + " rhs=" + fixed(rep.rhs, 10) + " slack=" + fixed(rep.slack) +
              (rep.holds ? " holds" : " VIOLATED") + (rep.advisory ? " (advisory)" : "") + "\n";
}

SearchOptions search_options(const ExperimentConfig& c) {
  SearchOptions o;
  o.p = c.p;
  o.eps = c.eps;
  o.trials = c.trials;
  o.success_threshold = c.success_threshold;
  o.m_max = c.m_max;
  o.generator = c.generator == "equispaced" ? SearchGenerator::equispaced : SearchGenerator::iid;
  o.budget = certify_budget(c);
  return o;
}

void run_study(const ExperimentConfig& c, Report& r, std::ostream* log) {
  const bool lacunary = c.kind == "study-lacunary";
  const std::string lead = lacunary ? "n" : "N";
  std::ostringstream csv;
  csv << lead << ",m,trials,successes,c1_min,c2_max\n";
  std::ostringstream table;
  // Lacunary sizes are n; the dimension column only adds information there.
  const auto size_cells = [&](std::ostream& out, int size, std::size_t dim) -> std::ostream& {
    out << std::setw(6) << size;
    if (lacunary) out << std::setw(6) << dim;
    return out;
  };
  table << std::left << std::setw(6) << lead;
  if (lacunary) table << std::setw(6) << "N";
  table << std::setw(8) << "m_star" << "bracket\n";
  std::vector<double> xs, ns, nlogn, ms;
  bool failed = false;
  for (int size : c.sizes) {
    Subspace space = lacunary ? make_lacunary_space(size, c.ratio)
                              : make_trig_space(1, cube_spectrum(1, (size - 1) / 2));
    const double N = static_cast<double>(space.size());
    SearchOptions o = search_options(c);
    o.seed = derive_stream(*c.seed, static_cast<std::uint64_t>(size));
    o.on_trial = [&](std::size_t m, int t, std::uint64_t stream, const Certificate& cert) {
      log_event(log, {{"event", "trial"}, {lead, size}, {"m", m}, {"trial", t}, {"stream", stream},
                      {"c1_pow", cert.c1_pow}, {"c2_pow", cert.c2_pow}});
    };
    const double upper = std::ceil(20.0 * N * std::log2(2.0 * N));
    Json rec = {{lead, size}, {"N", space.size()}, {"seed", o.seed}, {"bracket_upper", upper}};
    std::vector<CurvePoint> curve;
    try {
      const SearchResult res = minimal_m_search(space, o);
      curve = res.curve;
      rec["m_star"] = res.m_star;
      rec["within_bracket"] = res.m_star >= space.size() && static_cast<double>(res.m_star) <= upper;
      xs.push_back(size);
      ns.push_back(N);
      nlogn.push_back(N * std::log2(N));
      ms.push_back(static_cast<double>(res.m_star));
      size_cells(table, size, space.size()) << std::setw(8) << res.m_star << "[" << N
            << ", " << upper << "]\n";
    } catch (const SearchFailed& e) {
      curve = e.curve();
      rec["m_star"] = nullptr;
      rec["error"] = e.what();
      failed = true;
      size_cells(table, size, space.size()) << std::setw(8) << "-" << "search failed\n";
    }
    rec["curve"] = curve_to_json(curve);
    write_curve_csv(csv, curve, lead, size, false);
    r.json["records"].push_back(rec);
  }
  Json summary = {{"pairs", Json::array()}};
  for (std::size_t i = 0; i < xs.size(); ++i) summary["pairs"].push_back({std::lround(xs[i]), std::lround(ms[i])});
  summary["nondecreasing"] = std::is_sorted(ms.begin(), ms.end());
  const auto try_fit = [](const std::vector<double>& x, const std::vector<double>& y) -> std::optional<LogLogFit> {
    if (x.size() < 2 || std::any_of(x.begin(), x.end(), [](double v) { return v <= 0; })) return std::nullopt;
    try {
      return fit_loglog(x, y);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  const auto fit_json = [](const LogLogFit& f) {
    return Json{{"exponent", f.exponent}, {"intercept", f.intercept}, {"residual", f.residual}};
  };
  if (const auto vs_n = try_fit(ns, ms)) {
    summary["exponent_vs_N"] = fit_json(*vs_n);
    table << "fitted exponent vs N: " << fixed(vs_n->exponent) << " (residual " << fixed(vs_n->residual, 3) << ")";
    if (const auto vs_nlogn = try_fit(nlogn, ms)) {
      summary["exponent_vs_NlogN"] = fit_json(*vs_nlogn);
      table << "; vs N log N: " << fixed(vs_nlogn->exponent);
    }
    table << "\n";
  }
  if (lacunary && xs.size() >= 2)
    table << "m_star(" << xs.back() << ")/m_star(" << xs.front() << ") = " << fixed(ms.back() / ms.front()) << "\n";
  r.json["summary"] = summary;
  if (failed) r.status = "search-failed";
  r.series_csv = csv.str();
  r.summary = table.str();
}

void run_study_tensor(const ExperimentConfig& c, Report& r) {
  const Subspace space = space_from_json(c.space);
  const auto& factors = space.factors();
  check(factors.size() >= 2, ErrorCode::config_error, "space: study-tensor needs a tensor-product space");
  if (c.factor_sizes.size() != factors.size()) config_fail("factor_sizes", "one size per factor required");
  const GenerationMode fm = generation_mode_from_string(c.factor_mode);
  const CertifyBudget budget = certify_budget(c);

  std::vector<PointSet> sets;
  std::vector<Certificate> factor_certs;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    GenerateRequest sub;
    sub.mode = fm;
    sub.m = c.factor_sizes[i];
    if (c.seed) sub.seed = derive_stream(*c.seed, i);
    sets.push_back(std::get<PointSet>(generate_points(factors[i], sub)));
    factor_certs.push_back(certify(factors[i], sets.back(), c.p, budget));
  }
  const PointSet product = generate_tensor(sets);
  const Certificate cert = certify(space, product, c.p, budget);
  double lo = 1.0, hi = 1.0;
  for (const auto& fc : factor_certs) lo *= fc.c1_pow, hi *= fc.c2_pow;

  Json factors_json = Json::array();
  std::string csv = cert_csv_header();
  std::string table;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    Json fj = {{"index", i}, {"certificate", certificate_to_json(factor_certs[i])}};
    if (sets[i].provenance.seed) fj["stream"] = *sets[i].provenance.seed;
    csv += cert_csv_row("factor" + std::to_string(i), factor_certs[i]);
    table += cert_row("factor " + std::to_string(i), factor_certs[i]);
    try {
      const ExtractedFactor ex = extract_factor(space, product, i, cert);
      const Certificate direct = certify(factors[i], ex.points, c.p, budget);
      fj["extracted"] = certificate_to_json(ex.certificate);
      fj["direct"] = certificate_to_json(direct);
      csv += cert_csv_row("extracted" + std::to_string(i), ex.certificate);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::lemma_hypothesis_violated) throw;
      fj["extraction_error"] = e.what();
    }
    factors_json.push_back(fj);
  }
  csv += cert_csv_row("product", cert);
  table += cert_row("product", cert);
  table += "factor products: [" + fixed(lo, 10) + ", " + fixed(hi, 10) + "]\n";
  r.json["records"].push_back({{"factors", factors_json},
                               {"product", certificate_to_json(cert)},
                               {"product_of_factor_c1", lo},
                               {"product_of_factor_c2", hi}});
  constexpr double kProductTolerance = 1e-8;
  const bool within = cert.c1_pow >= lo - kProductTolerance && cert.c2_pow <= hi + kProductTolerance;
  r.json["summary"] = {{"c1_pow", cert.c1_pow}, {"c2_pow", cert.c2_pow}, {"lower", lo},
                       {"upper", hi},           {"within_bounds", within}};
  r.series_csv = csv;
  r.summary = table;
}

}  // namespace

std::vector<std::string> tolerance_keys() {
  return {"refine_tolerance", "minimax_tolerance",   "optimality_tolerance", "residual_floor",
          "sup_grid_factor",  "best_approx_grid",    "initial_grid",         "general_p_density",
          "max_quadrature_nodes", "slack"};
}

Json config_to_json(const ExperimentConfig& c) {
  Json j = {{"kind", c.kind},
            {"p", exponent_to_json(c.p)},
            {"q", exponent_to_json(c.q)},
            {"eps", c.eps},
            {"mode", c.mode},
            {"m", c.m},
            {"factor_sizes", c.factor_sizes},
            {"factor_mode", c.factor_mode},
            {"weights", c.weights},
            {"generator", c.generator},
            {"trials", c.trials},
            {"success_threshold", c.success_threshold},
            {"m_max", c.m_max},
            {"sizes", c.sizes},
            {"ratio", c.ratio},
            {"stage1_size", c.stage1_size},
            {"stage2_size", c.stage2_size},
            {"retries", c.retries},
            {"restarts", c.restarts},
            {"max_iterations", c.max_iterations},
            {"out", c.out},
            {"tolerances", c.tolerances},
            {"threads", c.threads}};
  if (!c.space.is_null()) j["space"] = c.space;
  if (!c.points.is_null()) j["points"] = c.points;
  if (!c.target.is_null()) j["target"] = c.target;
  if (c.seed) j["seed"] = *c.seed;
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) config_fail("config", "must be a JSON object");
  static const std::set<std::string> known = {
      "kind",   "space",  "p",           "q",           "eps",     "seed",     "mode",
      "m",      "factor_sizes", "factor_mode", "points", "weights", "generator", "trials",
      "success_threshold", "m_max", "sizes", "ratio", "stage1_size", "stage2_size", "retries",
      "restarts", "max_iterations", "target", "out", "tolerances", "threads"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) config_fail(key, "unknown field");

  ExperimentConfig c;
  read(j, "kind", c.kind);
  if (j.contains("space")) c.space = j["space"];
  if (j.contains("p")) c.p = exponent_from_json(j["p"], "p");
  if (j.contains("q")) c.q = exponent_from_json(j["q"], "q");
  read(j, "eps", c.eps);
  if (j.contains("seed") && !j["seed"].is_null()) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
      config_fail("seed", "must be a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  read(j, "mode", c.mode);
  read(j, "m", c.m);
  read(j, "factor_sizes", c.factor_sizes);
  read(j, "factor_mode", c.factor_mode);
  if (j.contains("points")) c.points = j["points"];
  read(j, "weights", c.weights);
  read(j, "generator", c.generator);
  read(j, "trials", c.trials);
  read(j, "success_threshold", c.success_threshold);
  read(j, "m_max", c.m_max);
  read(j, "sizes", c.sizes);
  read(j, "ratio", c.ratio);
  read(j, "stage1_size", c.stage1_size);
  read(j, "stage2_size", c.stage2_size);
  read(j, "retries", c.retries);
  read(j, "restarts", c.restarts);
  read(j, "max_iterations", c.max_iterations);
  if (j.contains("target")) c.target = j["target"];
  read(j, "out", c.out);
  read(j, "tolerances", c.tolerances);
  read(j, "threads", c.threads);
  return c;
}

void validate_config(const ExperimentConfig& c) {
  if (!kKinds.count(c.kind)) config_fail("kind", "unknown experiment kind '" + c.kind + "'");
  if (!(c.eps > 0.0 && c.eps < 1.0)) config_fail("eps", "must lie in (0, 1)");
  if (c.trials < 1) config_fail("trials", "must be at least 1");
  if (!(c.success_threshold > 0.0 && c.success_threshold <= 1.0))
    config_fail("success_threshold", "must lie in (0, 1]");
  if (c.restarts < 1) config_fail("restarts", "must be at least 1");
  if (c.max_iterations < 1) config_fail("max_iterations", "must be at least 1");
  if (c.retries < 0) config_fail("retries", "must be nonnegative");
  if (c.generator != "iid" && c.generator != "equispaced") config_fail("generator", "must be iid or equispaced");
  try {
    generation_mode_from_string(c.mode);
  } catch (const Error&) {
    config_fail("mode", "unknown generation mode '" + c.mode + "'");
  }
  try {
    generation_mode_from_string(c.factor_mode);
  } catch (const Error&) {
    config_fail("factor_mode", "unknown generation mode '" + c.factor_mode + "'");
  }
  const auto keys = tolerance_keys();
  for (const auto& [key, value] : c.tolerances) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) config_fail("tolerances." + key, "unknown key");
    if (!(value > 0)) config_fail("tolerances." + key, "must be positive");
  }

  const bool study = c.kind == "study-scaling" || c.kind == "study-lacunary";
  const bool uses_points = c.kind == "certify" || c.kind == "generate" || c.kind == "recover";
  if (!study && c.space.is_null()) config_fail("space", "missing");
  if (study) {
    if (c.sizes.empty()) config_fail("sizes", "must be a nonempty list");
    for (int s : c.sizes) {
      if (s < 1) config_fail("sizes", "entries must be positive");
      if (c.kind == "study-scaling" && s % 2 == 0) config_fail("sizes", "scaling studies use odd N = 2n + 1");
    }
    if (c.generator == "iid" && !c.seed) config_fail("seed", "required for randomized experiments");
  }
  if (uses_points && c.points.is_null()) {
    const bool tensor = c.mode == "tensor";
    if (!tensor && c.m < 1) config_fail("m", "must be at least 1");
    if (tensor && c.factor_sizes.empty()) config_fail("factor_sizes", "must be a nonempty list");
    const bool randomized = random_mode(c.mode) || (tensor && random_mode(c.factor_mode));
    if (randomized && !c.seed) config_fail("seed", "required for randomized experiments");
  }
  if (c.kind == "subsample") {
    if (!c.seed) config_fail("seed", "required for randomized experiments");
    if (c.q < 2.0) config_fail("q", "two-stage subsampling needs q >= 2");
  }
  if (c.kind == "study-tensor") {
    if (c.factor_sizes.empty()) config_fail("factor_sizes", "must be a nonempty list");
    if (random_mode(c.factor_mode) && !c.seed) config_fail("seed", "required for randomized experiments");
  }
  if (c.kind == "recover" && c.target.is_null()) config_fail("target", "missing");
}

Report run_experiment(const ExperimentConfig& config, std::ostream* log) {
  validate_config(config);
  const unsigned saved_threads = thread_count();
  if (config.threads > 0) set_thread_count(config.threads);
  const auto start = std::chrono::steady_clock::now();

  Report r;
  r.json = {{"toolkit", kToolkitName},
            {"version", toolkit_version()},
            {"kind", config.kind},
            {"config", config_to_json(config)},
            {"records", Json::array()}};
  r.json["seed"] = config.seed ? Json(*config.seed) : Json(nullptr);
  log_event(log, {{"event", "start"}, {"kind", config.kind}, {"seed", r.json["seed"]}});
  try {
    if (config.kind == "certify") run_certify(config, r);
    else if (config.kind == "nikolskii") run_nikolskii(config, r);
    else if (config.kind == "generate") run_generate(config, r);
    else if (config.kind == "subsample") run_subsample(config, r);
    else if (config.kind == "recover") run_recover(config, r);
    else if (config.kind == "study-tensor") run_study_tensor(config, r);
    else run_study(config, r, log);
  } catch (...) {
    set_thread_count(saved_threads);
    throw;
  }
  set_thread_count(saved_threads);
  r.json["status"] = r.status;
  r.json["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  log_event(log, {{"event", "done"}, {"kind", config.kind}, {"status", r.status}});
  return r;
}

void write_report(const Report& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream json(std::filesystem::path(dir) / "report.json");
  json << report.json.dump(2) << "\n";
  std::ofstream csv(std::filesystem::path(dir) / "series.csv");
  csv << report.series_csv;
  check(json.good() && csv.good(), ErrorCode::config_error, "out: cannot write to '" + dir + "'");
}

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  check(x.size() == y.size() && x.size() >= 2, ErrorCode::invalid_size, "fit needs at least two pairs");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    check(x[i] > 0 && y[i] > 0, ErrorCode::invalid_size, "log-log fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  LogLogFit fit;
  const double den = n * sxx - sx * sx;
  check(den > 0, ErrorCode::invalid_size, "log-log fit needs distinct abscissae");
  fit.exponent = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.exponent * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = std::log(y[i]) - fit.intercept - fit.exponent * std::log(x[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace sampdisc
