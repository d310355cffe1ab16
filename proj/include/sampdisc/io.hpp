#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sampdisc/discretization.hpp"
#include "sampdisc/norms.hpp"
#include "sampdisc/recovery.hpp"

namespace sampdisc {

using Json = nlohmann::json;

/// Space descriptions:
///   {"kind": "trig", "dimension": d, "spectrum": [[k1, ..., kd], ...]}
///   {"kind": "trig", "dimension": d, "degree": n}          (cube |k_i| <= n)
///   {"kind": "lacunary", "n": n, "ratio": b}
///   {"kind": "tensor", "factors": [...]}
///   {"kind": "finite-set", "values": [[v, ...], ...]}       (S rows, N columns;
///                                                             v is re or [re, im])
/// For d = 1 spectrum entries may be plain integers. Errors are config-error
/// with the offending field path, prefixed by `path`.
Subspace space_from_json(const Json& description, const std::string& path = "space");
Json space_to_json(const Subspace& space);

Json point_set_to_json(const PointSet& points);
PointSet point_set_from_json(const Json& j, const std::string& path = "points");
Json weighted_point_set_to_json(const WeightedPointSet& points);

Json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const Json& j);

Json nikolskii_to_json(const NikolskiiEstimate& estimate);
Json curve_to_json(const std::vector<CurvePoint>& curve);
Json recovery_report_to_json(const RecoveryBoundReport& report);

/// Exponent values as JSON: finite numbers, or the string "inf".
Json exponent_to_json(double p);
double exponent_from_json(const Json& j, const std::string& path);

/// Fixed CSV formatting for floating-point fields (17 significant digits).
std::string csv_number(double v);
/// Rows m, trials, successes, c1_min, c2_max, optionally preceded by a
/// constant column (for example N of the curve).
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve, const std::string& lead_name = "",
                     double lead_value = 0.0, bool header = true);

}  // namespace sampdisc
