#include <algorithm>
#include <cmath>

#include "sampdisc/discretization.hpp"
#include "sampdisc/norms.hpp"
#include "sampdisc/random.hpp"

namespace sampdisc {

std::string to_string(ProvenanceKind kind) {
  switch (kind) {
    case ProvenanceKind::iid: return "iid";
    case ProvenanceKind::equispaced: return "equispaced";
    case ProvenanceKind::tensor: return "tensor";
    case ProvenanceKind::leverage: return "leverage";
    case ProvenanceKind::subsample: return "subsample";
    case ProvenanceKind::given: return "given";
  }
  return "given";
}

std::string to_string(GenerationMode mode) {
  switch (mode) {
    case GenerationMode::iid: return "iid";
    case GenerationMode::equispaced: return "equispaced";
    case GenerationMode::tensor: return "tensor";
    case GenerationMode::leverage: return "leverage";
  }
  return "iid";
}

GenerationMode generation_mode_from_string(const std::string& s) {
  if (s == "iid") return GenerationMode::iid;
  if (s == "equispaced") return GenerationMode::equispaced;
  if (s == "tensor") return GenerationMode::tensor;
  if (s == "leverage") return GenerationMode::leverage;
  throw Error(ErrorCode::config_error, "unknown generation mode '" + s + "'");
}

WeightedPointSet::WeightedPointSet(PointSet p, std::vector<double> w) : points(std::move(p)), weights(std::move(w)) {
  check(weights.size() == points.size(), ErrorCode::invalid_size, "one weight per point required");
  for (double v : weights) check(v > 0 && std::isfinite(v), ErrorCode::invalid_weight, "weights must be positive");
  weight_sum = 0.0;
  for (double v : weights) weight_sum += v;
}

WeightedPointSet WeightedPointSet::uniform(PointSet p) {
  check(p.size() >= 1, ErrorCode::invalid_sample, "empty point set");
  const std::size_t m = p.size();
  return WeightedPointSet(std::move(p), std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

PointSet generate_iid(const Domain& domain, std::size_t m, std::uint64_t seed) {
  check(m >= 1, ErrorCode::invalid_size, "m must be at least 1");
  Rng rng(seed);
  PointSet out;
  out.points.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (domain.is_torus()) {
      Point x(static_cast<std::size_t>(domain.dimension()));
      for (auto& v : x) v = kTwoPi * rng.uniform();
      out.points.push_back(std::move(x));
    } else {
      out.points.push_back({static_cast<double>(rng.below(domain.size()))});
    }
  }
  out.provenance.kind = ProvenanceKind::iid;
  out.provenance.seed = seed;
  return out;
}

PointSet generate_equispaced(const Domain& domain, std::size_t m) {
  check(m >= 1, ErrorCode::invalid_size, "m must be at least 1");
  check(domain.is_torus(), ErrorCode::unsupported_domain, "equispaced nodes need a torus domain");
  const std::vector<int> per_dim(static_cast<std::size_t>(domain.dimension()), static_cast<int>(m));
  PointSet out;
  out.points = equispaced_grid(per_dim).nodes;
  out.provenance.kind = ProvenanceKind::equispaced;
  out.provenance.sizes.assign(per_dim.size(), m);
  return out;
}

PointSet generate_tensor(std::vector<PointSet> factors) {
  check(factors.size() >= 2, ErrorCode::invalid_sample, "tensor point sets need at least two factors");
  std::vector<std::vector<Point>> lists;
  PointSet out;
  for (auto& f : factors) {
    check(f.size() >= 1, ErrorCode::invalid_sample, "empty factor point set");
    lists.push_back(f.points);
    out.provenance.sizes.push_back(f.size());
    out.provenance.factors.push_back(std::make_shared<const PointSet>(std::move(f)));
  }
  out.points = cartesian_product(lists);
  out.provenance.kind = ProvenanceKind::tensor;
  return out;
}

WeightedPointSet generate_leverage(const Subspace& space, std::size_t m, std::uint64_t seed) {
  check(m >= 1, ErrorCode::invalid_size, "m must be at least 1");
  const auto N = static_cast<double>(space.size());
  const double t = christoffel_sup(space);
  const double envelope = N * t * t;
  Rng rng(seed);
  const Domain& domain = space.domain();

  PointSet ps;
  std::vector<double> weights;
  std::size_t proposals = 0;
  while (ps.size() < m) {
    Point x;
    if (domain.is_torus()) {
      x.resize(static_cast<std::size_t>(domain.dimension()));
      for (auto& v : x) v = kTwoPi * rng.uniform();
    } else {
      x = {static_cast<double>(rng.below(domain.size()))};
    }
    ++proposals;
    const double k = space.orthonormal_matrix(std::span<const Point>(&x, 1)).row(0).squaredNorm();
    if (rng.uniform() * envelope < k) {
      ps.points.push_back(std::move(x));
      weights.push_back(N / (static_cast<double>(m) * k));
    }
  }
  ps.provenance.kind = ProvenanceKind::leverage;
  ps.provenance.seed = seed;
  ps.provenance.acceptance_rate = static_cast<double>(m) / static_cast<double>(proposals);
  return WeightedPointSet(std::move(ps), std::move(weights));
}

std::variant<PointSet, WeightedPointSet> generate_points(const Subspace& space, const GenerateRequest& request) {
  auto need_seed = [&] {
    check(request.seed.has_value(), ErrorCode::missing_seed,
          "mode " + to_string(request.mode) + " needs a seed");
    return *request.seed;
  };
  switch (request.mode) {
    case GenerationMode::iid:
      return generate_iid(space.domain(), request.m, need_seed());
    case GenerationMode::equispaced:
      return generate_equispaced(space.domain(), request.m);
    case GenerationMode::leverage:
      return generate_leverage(space, request.m, need_seed());
    case GenerationMode::tensor: {
      const auto& factors = space.factors();
      check(!factors.empty(), ErrorCode::unsupported_domain, "tensor mode needs a tensor-product space");
      check(request.factor_sizes.size() == factors.size(), ErrorCode::invalid_size,
            "tensor mode needs one size per factor");
      check(request.factor_mode == GenerationMode::iid || request.factor_mode == GenerationMode::equispaced,
            ErrorCode::unsupported, "tensor factors are drawn iid or equispaced");
      std::vector<PointSet> sets;
      for (std::size_t i = 0; i < factors.size(); ++i) {
        GenerateRequest sub;
        sub.mode = request.factor_mode;
        sub.m = request.factor_sizes[i];
        if (request.seed) sub.seed = derive_stream(*request.seed, i);
        sets.push_back(std::get<PointSet>(generate_points(factors[i], sub)));
      }
      return generate_tensor(std::move(sets));
    }
  }
  throw Error(ErrorCode::unsupported, "unknown generation mode");
}

Subspace restrict_space(const Subspace& space, const PointSet& sample) {
  return restrict_space(space, std::span<const Point>(sample.points));
}

}  // namespace sampdisc
