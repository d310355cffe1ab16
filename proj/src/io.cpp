#include "sampdisc/io.hpp"

#include <cmath>
#include <cstdio>

namespace sampdisc {

namespace {

[[noreturn]] void config_fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::config_error, path + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) config_fail(path + "." + key, "missing");
  return j.at(key);
}

template <typename T>
T get_as(const Json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    config_fail(path, e.what());
  }
}

Frequency frequency_from_json(const Json& j, int dimension, const std::string& path) {
  Frequency k;
  if (j.is_number_integer()) {
    k.push_back(j.get<int>());
  } else if (j.is_array()) {
    k = get_as<Frequency>(j, path);
  } else {
    config_fail(path, "frequency must be an integer or an integer array");
  }
  if (static_cast<int>(k.size()) != dimension) config_fail(path, "frequency length differs from the dimension");
  return k;
}

Complex complex_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  config_fail(path, "expected a number or [re, im]");
}

Json complex_to_json(Complex z) {
  if (z.imag() == 0.0) return z.real();
  return Json::array({z.real(), z.imag()});
}

Json finite_values_to_json(const Eigen::MatrixXcd& values) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < values.cols(); ++c) row.push_back(complex_to_json(values(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Subspace space_from_json(const Json& d, const std::string& path) {
  if (!d.is_object()) config_fail(path, "space description must be an object");
  const auto kind = get_as<std::string>(field(d, "kind", path), path + ".kind");
  try {
    if (kind == "trig") {
      const int dimension = d.contains("dimension") ? get_as<int>(d["dimension"], path + ".dimension") : 1;
      if (dimension < 1) config_fail(path + ".dimension", "must be positive");
      if (d.contains("degree")) {
        const int n = get_as<int>(d["degree"], path + ".degree");
        if (n < 0) config_fail(path + ".degree", "must be nonnegative");
        return make_trig_space(dimension, cube_spectrum(dimension, n));
      }
      const Json& list = field(d, "spectrum", path);
      if (!list.is_array() || list.empty()) config_fail(path + ".spectrum", "must be a nonempty array");
      Spectrum s;
      for (std::size_t i = 0; i < list.size(); ++i)
        s.frequencies.push_back(
            frequency_from_json(list[i], dimension, path + ".spectrum[" + std::to_string(i) + "]"));
      return make_trig_space(dimension, std::move(s));
    }
    if (kind == "lacunary") {
      const int n = get_as<int>(field(d, "n", path), path + ".n");
      if (n < 1) config_fail(path + ".n", "must be positive");
      const double ratio = d.contains("ratio") ? get_as<double>(d["ratio"], path + ".ratio") : 2.0;
      return make_lacunary_space(n, ratio);
    }
    if (kind == "tensor") {
      const Json& list = field(d, "factors", path);
      if (!list.is_array() || list.size() < 2) config_fail(path + ".factors", "needs at least two factors");
      std::vector<Subspace> factors;
      for (std::size_t i = 0; i < list.size(); ++i)
        factors.push_back(space_from_json(list[i], path + ".factors[" + std::to_string(i) + "]"));
      return tensor_product(factors);
    }
    if (kind == "finite-set") {
      const Json& rows = field(d, "values", path);
      if (!rows.is_array() || rows.empty() || !rows[0].is_array() || rows[0].empty())
        config_fail(path + ".values", "must be a nonempty array of rows");
      const std::size_t S = rows.size(), N = rows[0].size();
      Eigen::MatrixXcd values(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(N));
      for (std::size_t r = 0; r < S; ++r) {
        const std::string rp = path + ".values[" + std::to_string(r) + "]";
        if (!rows[r].is_array() || rows[r].size() != N) config_fail(rp, "rows must have equal length");
        for (std::size_t c = 0; c < N; ++c)
          values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              complex_from_json(rows[r][c], rp + "[" + std::to_string(c) + "]");
      }
      return make_finite_space(std::move(values));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config_error) throw;
    config_fail(path, e.what());
  }
  config_fail(path + ".kind", "unknown space kind '" + kind + "'");
}

Json space_to_json(const Subspace& space) {
  const std::string& label = space.label();
  if (label == "tensor") {
    Json factors = Json::array();
    for (const auto& f : space.factors()) factors.push_back(space_to_json(f));
    return {{"kind", "tensor"}, {"factors", factors}};
  }
  if (label == "lacunary") {
    return {{"kind", "lacunary"},
            {"n", space.size()},
            {"ratio", *space.spectrum().lacunary_ratio}};
  }
  if (space.is_torus()) {
    Json spectrum = Json::array();
    for (const auto& k : space.spectrum().frequencies) spectrum.push_back(k);
    return {{"kind", "trig"}, {"dimension", space.domain().dimension()}, {"spectrum", spectrum}};
  }
  return {{"kind", "finite-set"}, {"values", finite_values_to_json(space.values())}};
}

Json point_set_to_json(const PointSet& points) {
  Json prov = {{"kind", to_string(points.provenance.kind)}};
  const Provenance& p = points.provenance;
  if (p.seed) prov["seed"] = *p.seed;
  if (!p.sizes.empty()) prov["sizes"] = p.sizes;
  if (!p.indices.empty()) prov["indices"] = p.indices;
  if (p.acceptance_rate) prov["acceptance_rate"] = *p.acceptance_rate;
  if (!p.factors.empty()) {
    Json factors = Json::array();
    for (const auto& f : p.factors) factors.push_back(point_set_to_json(*f));
    prov["factors"] = factors;
  }
  return {{"m", points.size()}, {"points", points.points}, {"provenance", prov}};
}

PointSet point_set_from_json(const Json& j, const std::string& path) {
  PointSet out;
  const Json& list = j.is_array() ? j : field(j, "points", path);
  out.points = get_as<std::vector<Point>>(list, path);
  if (out.points.empty()) config_fail(path, "point set is empty");
  return out;
}

Json weighted_point_set_to_json(const WeightedPointSet& points) {
  Json j = point_set_to_json(points.points);
  j["weights"] = points.weights;
  j["weight_sum"] = points.weight_sum;
  return j;
}

Json exponent_to_json(double p) {
  if (is_infinite_exponent(p)) return "inf";
  return p;
}

double exponent_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfinity;
    config_fail(path, "exponent must be a number or \"inf\"");
  }
  const double p = get_as<double>(j, path);
  if (!(p >= 1.0)) config_fail(path, "exponent must be >= 1");
  return p;
}

Json certificate_to_json(const Certificate& c) {
  return {{"p", exponent_to_json(c.p)},
          {"c1_pow", c.c1_pow},
          {"c2_pow", c.c2_pow},
          {"method", to_string(c.method)},
          {"status", to_string(c.status)},
          {"tolerance", c.tolerance},
          {"weighted", c.weighted},
          {"weight_sum", c.weight_sum},
          {"m", c.m}};
}

Certificate certificate_from_json(const Json& j) {
  Certificate c;
  c.p = exponent_from_json(field(j, "p", "certificate"), "certificate.p");
  c.c1_pow = get_as<double>(field(j, "c1_pow", "certificate"), "certificate.c1_pow");
  c.c2_pow = get_as<double>(field(j, "c2_pow", "certificate"), "certificate.c2_pow");
  const auto method = get_as<std::string>(field(j, "method", "certificate"), "certificate.method");
  const auto status = get_as<std::string>(field(j, "status", "certificate"), "certificate.status");
  bool found = false;
  for (auto m : {CertificateMethod::exact_eigen, CertificateMethod::exact_quadrature,
                 CertificateMethod::optimization_bound, CertificateMethod::brute_force})
    if (to_string(m) == method) c.method = m, found = true;
  if (!found) config_fail("certificate.method", "unknown method '" + method + "'");
  found = false;
  for (auto s : {CertificateStatus::certified, CertificateStatus::heuristic_upper_c1, CertificateStatus::heuristic})
    if (to_string(s) == status) c.status = s, found = true;
  if (!found) config_fail("certificate.status", "unknown status '" + status + "'");
  c.tolerance = j.value("tolerance", 0.0);
  c.weighted = j.value("weighted", false);
  c.weight_sum = j.value("weight_sum", 1.0);
  c.m = j.value("m", std::size_t{0});
  return c;
}

Json nikolskii_to_json(const NikolskiiEstimate& e) {
  Json j = {{"q", e.q},
            {"M", e.M},
            {"B", e.B},
            {"method", to_string(e.method)},
            {"status", e.method == NikolskiiMethod::analytic ? "certified" : "lower-bound"},
            {"grid_size", e.grid_size}};
  if (e.extremal) {
    Json c = Json::array();
    for (Eigen::Index i = 0; i < e.extremal->size(); ++i) c.push_back(complex_to_json((*e.extremal)[i]));
    j["extremal"] = c;
  }
  return j;
}

Json curve_to_json(const std::vector<CurvePoint>& curve) {
  Json out = Json::array();
  for (const auto& cp : curve)
    out.push_back({{"m", cp.m},
                   {"trials", cp.trials},
                   {"successes", cp.successes},
                   {"c1_min", cp.c1_min},
                   {"c2_max", cp.c2_max}});
  return out;
}

Json recovery_report_to_json(const RecoveryBoundReport& r) {
  Json coeffs = Json::array();
  for (Eigen::Index i = 0; i < r.recovery.coefficients.coefficients.size(); ++i)
    coeffs.push_back(complex_to_json(r.recovery.coefficients.coefficients[i]));
  return {{"p", exponent_to_json(r.p)},
          {"certificate", certificate_to_json(r.certificate)},
          {"c1_norm", r.c1_norm},
          {"c2_weights", r.c2_weights},
          {"bound_constant", r.bound_constant},
          {"lhs", r.lhs},
          {"lhs_tolerance", r.lhs_tolerance},
          {"d_inf", r.d_inf},
          {"rhs", r.rhs},
          {"slack", r.slack},
          {"holds", r.holds},
          {"advisory", r.advisory},
          {"recovery",
           {{"coefficients", coeffs},
            {"discrete_residual", r.recovery.discrete_residual},
            {"iterations", r.recovery.iterations},
            {"gradient_norm", r.recovery.gradient_norm},
            {"converged", r.recovery.converged},
            {"degenerate", r.recovery.degenerate}}}};
}

std::string csv_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve, const std::string& lead_name,
                     double lead_value, bool header) {
  const std::string lead = lead_name.empty() ? "" : csv_number(lead_value) + ",";
  if (header) out << (lead_name.empty() ? "" : lead_name + ",") << "m,trials,successes,c1_min,c2_max\n";
  for (const auto& cp : curve)
    out << lead << cp.m << ',' << cp.trials << ',' << cp.successes << ',' << csv_number(cp.c1_min) << ','
        << csv_number(cp.c2_max) << '\n';
}

}  // namespace sampdisc
