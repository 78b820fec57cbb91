#include "offerset/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "offerset/rng.hpp"

namespace offerset {

namespace {

std::vector<double> gaussian_vector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dim);
  for (double& x : v) x = normal(rng);
  return v;
}

}  // namespace

UnitVector random_unit(std::size_t dim, std::mt19937_64& rng) {
  for (;;) {
    auto g = gaussian_vector(dim, rng);
    double sq = 0.0;
    for (double x : g) sq += x * x;
    if (sq > 1e-24) return UnitVector::normalized(g);
  }
}

UnitVector at_distance(const UnitVector& u, double x, std::mt19937_64& rng) {
  if (!(x >= 0.0 && x <= 2.0)) throw std::invalid_argument("at_distance: x outside [0, 2]");
  double inner = 1.0 - 0.5 * x * x;
  double tangent_scale = std::sqrt(std::max(0.0, 1.0 - inner * inner));
  for (;;) {
    auto g = gaussian_vector(u.dim(), rng);
    double along = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) along += g[i] * u.coords()[i];
    double sq = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) {
      g[i] -= along * u.coords()[i];
      sq += g[i] * g[i];
    }
    if (sq <= 1e-24) continue;  // drew a vector parallel to u, retry
    double inv = 1.0 / std::sqrt(sq);
    std::vector<double> v(u.dim());
    for (std::size_t i = 0; i < u.dim(); ++i)
      v[i] = inner * u.coords()[i] + tangent_scale * inv * g[i];
    return UnitVector::normalized(v);
  }
}

DistanceUniformData gen_distance_uniform(std::size_t n, std::size_t dim, std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("gen: dimension must be at least 2");
  std::mt19937_64 rng(mix_seed(seed, streams::kData));
  UnitVector query = random_unit(dim, rng);
  std::uniform_real_distribution<double> unif(0.0, 2.0);
  ItemUniverse items(dim);
  for (std::size_t i = 0; i < n; ++i)
    items.add(static_cast<std::uint64_t>(i), at_distance(query, unif(rng), rng));
  return {std::move(items), std::move(query)};
}

ClusterMixtureData gen_cluster_mixture(std::size_t n, std::size_t dim, std::size_t clusters,
                                       double spread, std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("gen: dimension must be at least 2");
  if (clusters < 1) throw std::invalid_argument("gen: need at least one cluster");
  if (clusters > dim)
    throw std::invalid_argument("gen: cluster count cannot exceed the dimension");
  if (!(spread >= 0.0)) throw std::invalid_argument("gen: spread must be nonnegative");

  std::mt19937_64 rng(mix_seed(seed, streams::kData));

  // Orthonormal directions via Gram-Schmidt, then recentered so centers
  // repel each other: pairwise inner product -1/(clusters-1).
  std::vector<std::vector<double>> basis;
  while (basis.size() < clusters) {
    auto g = gaussian_vector(dim, rng);
    for (const auto& b : basis) {
      double along = 0.0;
      for (std::size_t i = 0; i < dim; ++i) along += g[i] * b[i];
      for (std::size_t i = 0; i < dim; ++i) g[i] -= along * b[i];
    }
    double sq = 0.0;
    for (double x : g) sq += x * x;
    if (sq <= 1e-20) continue;
    double inv = 1.0 / std::sqrt(sq);
    for (double& x : g) x *= inv;
    basis.push_back(std::move(g));
  }

  std::vector<UnitVector> centers;
  centers.reserve(clusters);
  if (clusters == 1) {
    centers.push_back(UnitVector::normalized(basis[0]));
  } else {
    std::vector<double> mean(dim, 0.0);
    for (const auto& b : basis)
      for (std::size_t i = 0; i < dim; ++i) mean[i] += b[i] / static_cast<double>(clusters);
    for (const auto& b : basis) {
      std::vector<double> centered(dim);
      for (std::size_t i = 0; i < dim; ++i) centered[i] = b[i] - mean[i];
      centers.push_back(UnitVector::normalized(centered));
    }
  }

  ClusterMixtureData data{ItemUniverse(dim), std::move(centers), {}};
  data.item_cluster.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto cluster = static_cast<std::uint32_t>(i % clusters);
    auto noise = gaussian_vector(dim, rng);
    std::vector<double> v(dim);
    const auto& c = data.centers[cluster].coords();
    for (std::size_t j = 0; j < dim; ++j) v[j] = c[j] + spread * noise[j];
    data.items.add(static_cast<std::uint64_t>(i), UnitVector::normalized(v));
    data.item_cluster.push_back(cluster);
  }
  return data;
}

UserMixture sample_user_from_items(const ItemUniverse& items, std::size_t m,
                                   std::mt19937_64& rng) {
  if (items.size() == 0) throw std::invalid_argument("cannot sample a user from no items");
  if (m < 1) throw std::invalid_argument("user mixture needs at least one type");
  std::uniform_int_distribution<std::size_t> pick(0, items.size() - 1);
  std::vector<UnitVector> types;
  types.reserve(m);
  for (std::size_t i = 0; i < m; ++i) types.push_back(items.unit_vector(pick(rng)));
  return UserMixture(std::move(types));
}

}  // namespace offerset
