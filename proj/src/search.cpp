#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sampdisc/discretization.hpp"
#include "sampdisc/parallel.hpp"
#include "sampdisc/random.hpp"

namespace sampdisc {

namespace {

bool meets(const Certificate& c, double eps) { return c.c1_pow >= 1.0 - eps && c.c2_pow <= 1.0 + eps; }

double violation(const Certificate& c, double eps) {
  return std::max(0.0, 1.0 - eps - c.c1_pow) + std::max(0.0, c.c2_pow - 1.0 - eps);
}

PointSet index_points(std::span<const std::size_t> indices) {
  PointSet out;
  for (std::size_t i : indices) out.points.push_back({static_cast<double>(i)});
  return out;
}

}  // namespace

TwoStageResult two_stage_subsample(const Subspace& space, double q, double eps, const TwoStageBudget& budgets,
                                   std::uint64_t seed, const CertifyBudget& certify_budget) {
  check(q >= 2.0, ErrorCode::invalid_exponent, "two-stage subsampling needs q >= 2");
  check(eps > 0.0 && eps < 1.0, ErrorCode::config_error, "eps must lie in (0, 1)");
  check(budgets.stage1_size >= 1 && budgets.stage2_size >= 1 && budgets.retries >= 0, ErrorCode::invalid_size,
        "budgets must be positive");
  check(budgets.stage2_size <= budgets.stage1_size, ErrorCode::invalid_size, "stage-2 size exceeds stage-1 size");

  TwoStageResult result;
  result.stage1 = generate_iid(space.domain(), budgets.stage1_size, derive_stream(seed, 1));
  result.stage1_certificate = certify(space, result.stage1, q, certify_budget);
  const auto parent = std::make_shared<const PointSet>(result.stage1);
  const Subspace restricted = restrict_space(space, result.stage1);
  const std::size_t S = budgets.stage1_size;
  const std::size_t m = budgets.stage2_size;

  auto finish = [&](TwoStageResult& r, std::vector<std::size_t> indices) {
    r.restricted_certificate = certify(restricted, index_points(indices), q, certify_budget);
  };

  if (m == S) {
    std::vector<std::size_t> all(S);
    std::iota(all.begin(), all.end(), std::size_t{0});
    result.points = result.stage1;
    result.certificate = result.stage1_certificate;
    result.attempts = 1;
    finish(result, all);
    if (!meets(result.certificate, eps))
      throw BudgetExhausted("stage-1 set does not meet the requested constants", result);
    return result;
  }

  TwoStageResult best = result;
  std::vector<std::size_t> best_indices;
  double best_violation = kInfinity;
  for (int a = 0; a <= budgets.retries; ++a) {
    Rng rng(derive_stream(seed, 2, static_cast<std::uint64_t>(a)));
    std::vector<std::size_t> pool(S);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < m; ++i) std::swap(pool[i], pool[i + rng.below(S - i)]);
    std::vector<std::size_t> indices(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
    std::sort(indices.begin(), indices.end());

    PointSet subset;
    for (std::size_t i : indices) subset.points.push_back(result.stage1.points[i]);
    subset.provenance.kind = ProvenanceKind::subsample;
    subset.provenance.seed = derive_stream(seed, 2, static_cast<std::uint64_t>(a));
    subset.provenance.parent = parent;
    subset.provenance.indices = indices;

    const Certificate cert = certify(space, subset, q, certify_budget);
    const double v = violation(cert, eps);
    if (v < best_violation) {
      best_violation = v;
      best.points = std::move(subset);
      best.certificate = cert;
      best_indices = indices;
    }
    best.attempts = a + 1;
    if (v == 0.0 && meets(cert, eps)) {
      finish(best, best_indices);
      return best;
    }
  }
  finish(best, best_indices);
  throw BudgetExhausted("no stage-2 subset met the requested constants in " + std::to_string(best.attempts) +
                            " attempts",
                        best);
}

Certificate search_trial(const Subspace& space, const SearchOptions& options, std::size_t m, int trial) {
  const std::uint64_t stream = derive_stream(options.seed, m, static_cast<std::uint64_t>(trial));
  PointSet points;
  if (options.generator == SearchGenerator::equispaced) {
    check(space.is_torus() && space.domain().dimension() == 1, ErrorCode::unsupported,
          "the equispaced search generator is one-dimensional");
    points = generate_equispaced(space.domain(), m);
  } else {
    points = generate_iid(space.domain(), m, stream);
  }
  CertifyBudget budget = options.budget;
  budget.seed = derive_stream(stream, 0);
  return certify(space, points, options.p, budget);
}

SearchResult minimal_m_search(const Subspace& space, const SearchOptions& options) {
  check(options.eps > 0.0 && options.eps < 1.0, ErrorCode::config_error, "eps must lie in (0, 1)");
  check(options.trials >= 1, ErrorCode::config_error, "trials must be at least 1");
  check(options.success_threshold > 0.0 && options.success_threshold <= 1.0, ErrorCode::config_error,
        "success threshold must lie in (0, 1]");
  const std::size_t N = space.size();
  const std::size_t m_max =
      options.m_max > 0 ? options.m_max
                        : static_cast<std::size_t>(std::ceil(20.0 * N * std::log2(2.0 * static_cast<double>(N))));
  check(m_max >= N, ErrorCode::config_error, "m_max is below the dimension");
  const int needed = static_cast<int>(std::ceil(options.success_threshold * options.trials - 1e-9));

  std::map<std::size_t, CurvePoint> evaluated;
  auto ok = [&](std::size_t m) {
    auto it = evaluated.find(m);
    if (it == evaluated.end()) {
      const auto T = static_cast<std::size_t>(options.trials);
      std::vector<Certificate> certs(T);
      parallel_for(T, [&](std::size_t t) { certs[t] = search_trial(space, options, m, static_cast<int>(t)); });
      CurvePoint cp;
      cp.m = m;
      cp.trials = options.trials;
      cp.c1_min = kInfinity;
      cp.c2_max = 0.0;
      for (std::size_t t = 0; t < T; ++t) {
        if (meets(certs[t], options.eps)) ++cp.successes;
        cp.c1_min = std::min(cp.c1_min, certs[t].c1_pow);
        cp.c2_max = std::max(cp.c2_max, certs[t].c2_pow);
        if (options.on_trial)
          options.on_trial(m, static_cast<int>(t), derive_stream(options.seed, m, static_cast<std::uint64_t>(t)),
                           certs[t]);
      }
      it = evaluated.emplace(m, cp).first;
    }
    return it->second.successes >= needed;
  };
  auto curve = [&] {
    std::vector<CurvePoint> c;
    for (const auto& [m, cp] : evaluated) c.push_back(cp);
    return c;
  };

  std::size_t lo = N - 1;  // largest size known to fail
  std::size_t hi = N;
  while (!ok(hi)) {
    if (hi >= m_max)
      throw SearchFailed("no m <= " + std::to_string(m_max) + " reached the success threshold", curve());
    lo = hi;
    hi = std::min(2 * hi, m_max);
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  return {hi, curve()};
}

ExtractedFactor extract_factor(const Subspace& tensor_space, const PointSet& tensor_sample, std::size_t index,
                               const Certificate& tensor_certificate) {
  const auto& factors = tensor_space.factors();
  check(!factors.empty(), ErrorCode::unsupported_domain, "factor extraction needs a tensor-product space");
  check(tensor_sample.provenance.kind == ProvenanceKind::tensor &&
            tensor_sample.provenance.factors.size() == factors.size(),
        ErrorCode::invalid_sample, "sample lacks tensor provenance matching the space");
  check(index < factors.size(), ErrorCode::invalid_size, "factor index out of range");
  for (const auto& f : factors)
    check(f.contains_constant(), ErrorCode::lemma_hypothesis_violated,
          "every factor must contain the constant function");
  ExtractedFactor out;
  out.points = *tensor_sample.provenance.factors[index];
  out.certificate = tensor_certificate;
  out.certificate.m = out.points.size();
  return out;
}

namespace budgets {

double random_points(double K, double beta, double eps, double N, double C) {
  return C * std::pow(K, beta) * std::log(2.0 / eps) / (eps * eps) * std::pow(N, beta + 1.0) * std::log(N);
}

double stage1(double B, double q, double eps, double N, double C) {
  return C * std::pow(B, q) * std::log(2.0 / eps) / (eps * eps) * N * N * std::log(N);
}

double entropy_bound(double B, double q, double N, double C) {
  return C * std::pow(B, q) * N * std::pow(std::log2(2.0 * B * N), 2.0);
}

double nikolskii_bound(double B, double q, double N, double C) {
  return C * std::pow(B, q) * N * std::pow(std::log2(2.0 * B * N), 3.0);
}

double nikolskii_bound_p(double B, double p, double q, double N, double C) {
  return C * std::pow(B, p) * std::pow(N, p / q) * std::pow(std::log2(2.0 * B * N), 3.0);
}

}  // namespace budgets

}  // namespace sampdisc
