#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sampdisc/discretization.hpp"
#include "sampdisc/experiments.hpp"
#include "sampdisc/norms.hpp"
#include "sampdisc/random.hpp"
#include "sampdisc/recovery.hpp"

using namespace sampdisc;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (failures_.size() < 6) failures_.push_back(what);
    }
  }
  void note(const std::string& s) { notes_.push_back(s); }

  Outcome outcome() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < notes_.size(); ++i) out << (i ? "; " : "") << notes_[i];
    for (const auto& f : failures_) out << (out.tellp() > 0 ? "; " : "") << "FAILED " << f;
    return {pass_, out.str()};
  }

 private:
  bool pass_ = true;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Subspace trig_degree(int n) { return make_trig_space(1, cube_spectrum(1, n)); }

Subspace trig_of(const std::vector<int>& ks) {
  Spectrum s;
  for (int k : ks) s.frequencies.push_back({k});
  return make_trig_space(1, s);
}

std::string cert_pair(const Certificate& c) { return "(" + num(c.c1_pow, 12) + ", " + num(c.c2_pow, 12) + ")"; }

// ------------------------------------------------------------------ criteria

Outcome exact_quadrature_certificate() {
  Checker ck;
  double worst = 0.0;
  for (int n : {1, 2, 4, 8, 16}) {
    const Subspace s = trig_degree(n);
    const Certificate c = certify(s, generate_equispaced(s.domain(), s.size()), 2.0);
    const double err = std::max(std::abs(c.c1_pow - 1), std::abs(c.c2_pow - 1));
    worst = std::max(worst, err);
    ck.require(err <= 1e-10, "n=" + std::to_string(n) + " " + cert_pair(c));
    ck.require(c.status == CertificateStatus::certified, "n=" + std::to_string(n) + " not certified");
  }
  ck.note("max deviation from (1,1) " + num(worst, 3));
  return ck.outcome();
}

Outcome even_p_exactness() {
  Checker ck;
  const Subspace s = trig_of({-1, 1});
  const PointSet pts = generate_equispaced(s.domain(), 5);
  const Certificate c = certify(s, pts, 4.0);
  ck.require(std::abs(c.c1_pow - 1) <= 1e-8 && std::abs(c.c2_pow - 1) <= 1e-8, "certify " + cert_pair(c));
  const Certificate o = brute_force_certificate(s, pts, 4.0, 200);
  const double d = std::max(std::abs(o.c1_pow - c.c1_pow), std::abs(o.c2_pow - c.c2_pow));
  ck.require(d <= o.tolerance, "oracle " + cert_pair(o) + " tolerance " + num(o.tolerance, 3));
  ck.note("certify " + cert_pair(c) + " [" + to_string(c.method) + "], oracle " + cert_pair(o) + " +- " +
          num(o.tolerance, 3));
  return ck.outcome();
}

Outcome nikolskii_anchors() {
  Checker ck;
  double worst_trig = 0, worst_lac = 0, worst_b = -1e300;
  for (int N : {3, 5, 9, 17}) {
    const NikolskiiEstimate e = nikolskii_constant(trig_degree((N - 1) / 2), 2.0);
    worst_trig = std::max(worst_trig, std::abs(e.M - std::sqrt(N)));
    ck.require(std::abs(e.M - std::sqrt(N)) <= 1e-10, "trig N=" + std::to_string(N) + " M=" + num(e.M, 15));
  }
  for (int n = 1; n <= 6; ++n) {
    const Subspace s = make_lacunary_space(n, 2.0);
    const NikolskiiEstimate e2 = nikolskii_constant(s, 2.0);
    worst_lac = std::max(worst_lac, std::abs(e2.M - std::sqrt(n)));
    ck.require(std::abs(e2.M - std::sqrt(n)) <= 1e-8, "lacunary n=" + std::to_string(n) + " M=" + num(e2.M, 15));
    if (n >= 2) {
      const NikolskiiEstimate e4 = nikolskii_constant(s, 4.0);
      const double margin = e4.B - std::pow(n, 0.25);
      worst_b = std::max(worst_b, margin);
      ck.require(margin <= 1e-6, "lacunary n=" + std::to_string(n) + " q=4 B=" + num(e4.B, 10));
    }
  }
  ck.note("trig |M - sqrt N| <= " + num(worst_trig, 3) + ", lacunary |M - sqrt n| <= " + num(worst_lac, 3) +
          ", max(B - n^(1/4)) at q=4 = " + num(worst_b, 4));
  return ck.outcome();
}

Outcome oracle_equivalence() {
  Checker ck;
  Rng rng(404);
  const double exps[] = {2.0, 3.0, 4.0};
  double worst_ratio = 0.0, worst_tol = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int N = 1 + static_cast<int>(rng.below(3));
    std::set<int> ks;
    while (static_cast<int>(ks.size()) < N) ks.insert(static_cast<int>(rng.below(9)) - 4);
    const Subspace s = trig_of(std::vector<int>(ks.begin(), ks.end()));
    const double p = exps[i % 3];
    const std::size_t m = static_cast<std::size_t>(N) + rng.below(2 * N + 3);
    const PointSet pts = generate_iid(s.domain(), m, derive_stream(404, i));
    const Certificate c = certify(s, pts, p);
    const Certificate o = brute_force_certificate(s, pts, p, 200);
    const double d = std::max(std::abs(c.c1_pow - o.c1_pow), std::abs(c.c2_pow - o.c2_pow));
    worst_tol = std::max(worst_tol, o.tolerance);
    if (o.tolerance > 0) worst_ratio = std::max(worst_ratio, d / o.tolerance);
    const std::string tag = "instance " + std::to_string(i) + " N=" + std::to_string(N) + " p=" + num(p) +
                            " m=" + std::to_string(m);
    ck.require(o.tolerance <= 1e-3, tag + " oracle tolerance " + num(o.tolerance, 3));
    ck.require(d <= o.tolerance, tag + " certify " + cert_pair(c) + " oracle " + cert_pair(o));
  }
  ck.note("max |certify - oracle| / oracle tolerance = " + num(worst_ratio, 3) + ", max oracle tolerance " +
          num(worst_tol, 3));
  return ck.outcome();
}

ExperimentConfig study_config(const std::string& kind, std::vector<int> sizes, double p) {
  ExperimentConfig c;
  c.kind = kind;
  c.sizes = std::move(sizes);
  c.p = p;
  c.eps = 0.5;
  c.trials = 50;
  c.success_threshold = 0.9;
  c.seed = 7;
  return c;
}

std::map<int, std::string> g_csv;

std::string pairs_text(const Json& summary) {
  std::string s;
  for (const auto& pr : summary["pairs"]) s += (s.empty() ? "" : " ") + pr[0].dump() + ":" + pr[1].dump();
  return s;
}

Outcome scaling() {
  Checker ck;
  const Report r = run_experiment(study_config("study-scaling", {5, 9, 17, 33}, 2.0));
  g_csv[5] = r.series_csv;
  ck.require(r.status == "ok", "status " + r.status);
  for (const auto& rec : r.json["records"]) {
    const int N = rec["N"].get<int>();
    const double upper = 20.0 * N * std::log2(2.0 * N);
    const bool ok = rec["m_star"].is_number() && rec["m_star"].get<double>() >= N && rec["m_star"].get<double>() <= upper;
    ck.require(ok, "N=" + std::to_string(N) + " m_star=" + rec["m_star"].dump());
  }
  const auto& summary = r.json["summary"];
  if (summary.contains("exponent_vs_N")) {
    const double e = summary["exponent_vs_N"]["exponent"].get<double>();
    ck.require(e >= 0.9 && e <= 1.4, "exponent " + num(e));
    ck.note("m_star " + pairs_text(summary) + ", exponent vs N " + num(e, 4));
  } else {
    ck.require(false, "no exponent fit");
  }
  return ck.outcome();
}

Outcome tensor_multiplicativity() {
  Checker ck;
  const Subspace a = trig_degree(1), b = trig_of({0, 1, 2});
  const Subspace t = tensor_product({a, b});
  double worst = -1e300;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const PointSet pa = generate_iid(a.domain(), 5 + seed, derive_stream(6, seed, 0));
    const PointSet pb = generate_iid(b.domain(), 4 + 2 * seed, derive_stream(6, seed, 1));
    const Certificate ca = certify(a, pa, 2.0), cb = certify(b, pb, 2.0);
    const Certificate ct = certify(t, generate_tensor({pa, pb}), 2.0);
    const double lo = ca.c1_pow * cb.c1_pow, hi = ca.c2_pow * cb.c2_pow;
    worst = std::max({worst, lo - ct.c1_pow, ct.c2_pow - hi});
    ck.require(ct.c1_pow >= lo - 1e-8 && ct.c2_pow <= hi + 1e-8,
               "seed " + std::to_string(seed) + " product " + cert_pair(ct) + " bounds [" + num(lo) + ", " +
                   num(hi) + "]");
  }
  const Certificate exact =
      certify(t, generate_tensor({generate_equispaced(a.domain(), 3), generate_equispaced(b.domain(), 5)}), 2.0);
  ck.require(std::abs(exact.c1_pow - 1) <= 1e-8 && std::abs(exact.c2_pow - 1) <= 1e-8,
             "exact factors gave " + cert_pair(exact));
  ck.note("max bound violation " + num(worst, 3) + " (negative is inside), exact product " + cert_pair(exact));
  return ck.outcome();
}

Outcome factor_extraction() {
  Checker ck;
  const Subspace a = trig_degree(1), b = trig_degree(2);
  const Subspace t = tensor_product({a, b});
  const Subspace factors[] = {a, b};
  double worst_match = 0.0, worst_validity = -1e300;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const PointSet random = generate_iid(factors[i].domain(), 6 + 2 * seed, derive_stream(7, i, seed));
      const PointSet exact = generate_equispaced(factors[1 - i].domain(), factors[1 - i].size());
      const PointSet product = i == 0 ? generate_tensor({random, exact}) : generate_tensor({exact, random});
      const ExtractedFactor ex = extract_factor(t, product, i, certify(t, product, 2.0));
      const Certificate direct = certify(factors[i], ex.points, 2.0);
      const double d = std::max(std::abs(ex.certificate.c1_pow - direct.c1_pow),
                                std::abs(ex.certificate.c2_pow - direct.c2_pow));
      worst_match = std::max(worst_match, d);
      ck.require(d <= 1e-8, "factor " + std::to_string(i) + " seed " + std::to_string(seed) + " transferred " +
                                cert_pair(ex.certificate) + " direct " + cert_pair(direct));

      // Both factors random: the transferred constants remain valid.
      const PointSet other = generate_iid(factors[1 - i].domain(), 9, derive_stream(7, i, seed, 1));
      const PointSet both = i == 0 ? generate_tensor({random, other}) : generate_tensor({other, random});
      const ExtractedFactor ex2 = extract_factor(t, both, i, certify(t, both, 2.0));
      const Certificate direct2 = certify(factors[i], ex2.points, 2.0);
      const double v = std::max(ex2.certificate.c1_pow - direct2.c1_pow, direct2.c2_pow - ex2.certificate.c2_pow);
      worst_validity = std::max(worst_validity, v);
      ck.require(v <= 1e-8, "transferred " + cert_pair(ex2.certificate) + " not valid for direct " +
                                cert_pair(direct2));
    }
  }
  ck.note("max |transferred - direct| " + num(worst_match, 3) + "; transferred bounds valid with margin " +
          num(-worst_validity, 3));
  return ck.outcome();
}

struct RecoveryInstance {
  std::string name;
  Subspace space;
  WeightedPointSet sample;
  double p;
  TargetFunction f;
};

std::vector<RecoveryInstance> recovery_fixture() {
  const std::vector<std::pair<std::string, TargetFunction>> targets = {
      {"exp(cos(x-1))", [](const Point& x) { return Complex(std::exp(std::cos(x[0] - 1))); }},
      {"|sin x|^3", [](const Point& x) { return Complex(std::pow(std::abs(std::sin(x[0])), 3)); }},
      {"1/(1.6+cos x)", [](const Point& x) { return Complex(1 / (1.6 + std::cos(x[0]))); }},
      {"e^{3ix}+cos x", [](const Point& x) { return std::polar(1.0, 3 * x[0]) + std::cos(x[0]); }},
      {"sawtooth", [](const Point& x) { return Complex(std::sin(x[0]) + 0.5 * std::sin(2 * x[0]) + std::sin(5 * x[0]) / 5); }},
  };
  const std::vector<std::vector<int>> spectra = {{-1, 0, 1}, {-2, -1, 0, 1, 2}, {-3, 0, 1, 4}, {0, 1, 2}, {-1, 0, 2}};
  std::vector<RecoveryInstance> out;
  for (int i = 0; i < 10; ++i) {
    const Subspace s = trig_of(spectra[i % 5]);
    const std::size_t m = 4 * s.size() + static_cast<std::size_t>(i);
    PointSet pts = generate_iid(s.domain(), m, derive_stream(8, i));
    WeightedPointSet w = WeightedPointSet::uniform(pts);
    if (i % 3 == 2) {
      // Non-uniform weights with sum above 1.
      Rng rng(derive_stream(8, i, 1));
      std::vector<double> wt(m);
      for (double& v : wt) v = (0.5 + rng.uniform()) * 1.2 / static_cast<double>(m);
      w = WeightedPointSet(pts, wt);
    }
    out.push_back({"p=2 #" + std::to_string(i) + " " + targets[i % 5].first, s, w, 2.0, targets[i % 5].second});
  }
  for (int i = 0; i < 10; ++i) {
    const auto& ks = spectra[i % 5];
    const Subspace s = trig_of(ks);
    const int spread = *std::max_element(ks.begin(), ks.end()) - *std::min_element(ks.begin(), ks.end());
    const std::size_t m = static_cast<std::size_t>(2 * spread + 1 + i % 3);
    Rng rng(derive_stream(8, 100 + i));
    const double shift = kTwoPi * rng.uniform() / static_cast<double>(m);
    PointSet pts;
    for (std::size_t j = 0; j < m; ++j) pts.points.push_back({shift + kTwoPi * static_cast<double>(j) / static_cast<double>(m)});
    out.push_back({"p=4 #" + std::to_string(i) + " " + targets[(i + 2) % 5].first, s,
                   WeightedPointSet::uniform(pts), 4.0, targets[(i + 2) % 5].second});
  }
  return out;
}

Outcome recovery() {
  Checker ck;
  double worst = 0.0;
  for (const auto& inst : recovery_fixture()) {
    try {
      const RecoveryBoundReport r = verify_recovery(inst.f, inst.space, inst.sample, inst.p);
      worst = std::max(worst, r.lhs / r.rhs);
      ck.require(r.lhs <= r.rhs * 1.05, inst.name + " lhs " + num(r.lhs) + " rhs " + num(r.rhs));
      ck.require(r.certificate.status == CertificateStatus::certified, inst.name + " not certified");
    } catch (const Error& e) {
      ck.require(false, inst.name + ": " + e.what());
    }
  }
  const Subspace s = trig_degree(1);
  const TargetFunction cos2 = [](const Point& x) { return Complex(std::cos(2 * x[0])); };
  const RecoveryBoundReport a =
      verify_recovery(cos2, s, WeightedPointSet::uniform(generate_equispaced(s.domain(), 9)), 2.0);
  // d_inf is a Lawson lower bound stopped at the minimax solver's relative
  // tolerance, so rhs can sit below 3 by at most that fraction.
  const double minimax_tolerance = NormOptions{}.minimax_tolerance;
  ck.require(std::abs(a.lhs - 1 / std::sqrt(2.0)) <= 1e-6, "anchor lhs " + num(a.lhs, 10));
  ck.require(std::abs(a.rhs - 3.0) <= 3.0 * minimax_tolerance, "anchor rhs " + num(a.rhs, 10));
  ck.require(a.holds, "anchor bound violated");
  ck.note("20 instances, max lhs/rhs " + num(worst, 4) + "; anchor lhs " + num(a.lhs, 10) + " rhs " +
          num(a.rhs, 10));
  return ck.outcome();
}

Outcome lacunary() {
  Checker ck;
  const Report r = run_experiment(study_config("study-lacunary", {2, 3, 4, 5}, 4.0));
  g_csv[9] = r.series_csv;
  ck.require(r.status == "ok", "status " + r.status);
  std::vector<double> ms;
  for (const auto& pr : r.json["summary"]["pairs"]) ms.push_back(pr[1].get<double>());
  ck.require(ms.size() == 4, "expected four m_star values");
  if (ms.size() == 4) {
    ck.require(std::is_sorted(ms.begin(), ms.end()), "m_star not nondecreasing");
    ck.require(ms[3] / ms[0] >= 2.5, "ratio " + num(ms[3] / ms[0]));
    ck.note("m_star " + pairs_text(r.json["summary"]) + ", ratio m*(5)/m*(2) = " + num(ms[3] / ms[0], 4));
  }
  return ck.outcome();
}

Outcome determinism() {
  Checker ck;
  if (!g_csv.count(5)) g_csv[5] = run_experiment(study_config("study-scaling", {5, 9, 17, 33}, 2.0)).series_csv;
  if (!g_csv.count(9)) g_csv[9] = run_experiment(study_config("study-lacunary", {2, 3, 4, 5}, 4.0)).series_csv;
  const std::string again5 = run_experiment(study_config("study-scaling", {5, 9, 17, 33}, 2.0)).series_csv;
  const std::string again9 = run_experiment(study_config("study-lacunary", {2, 3, 4, 5}, 4.0)).series_csv;
  ck.require(again5 == g_csv[5], "scaling CSV differs");
  ck.require(again9 == g_csv[9], "lacunary CSV differs");
  ck.note("scaling CSV " + std::to_string(again5.size()) + " bytes, lacunary CSV " + std::to_string(again9.size()) +
          " bytes, identical on re-run");
  return ck.outcome();
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"exact-quadrature certificate", exact_quadrature_certificate},
      {"even-p exactness", even_p_exactness},
      {"Nikol'skii anchors", nikolskii_anchors},
      {"oracle equivalence", oracle_equivalence},
      {"random-sampling scaling", scaling},
      {"tensor multiplicativity", tensor_multiplicativity},
      {"factor extraction", factor_extraction},
      {"recovery bound", recovery},
      {"lacunary trend", lacunary},
      {"determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << " " << criteria[k].first << " ("
              << num(secs, 3) << " s): " << o.detail << std::endl;
  }
  std::cout << (failed ? "FAILED " + std::to_string(failed) + " criteria" : std::string("all criteria passed"))
            << std::endl;
  return failed ? 1 : 0;
}
