// Synthetic instance generators: a universe whose distances to one query
// point are uniform on [0, 2], and clustered universes for the
// recommendation benchmark.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "offerset/geometry.hpp"

namespace offerset {

UnitVector random_unit(std::size_t dim, std::mt19937_64& rng);

// A unit vector at exactly distance x from u with a uniformly random
// tangential component.
UnitVector at_distance(const UnitVector& u, double x, std::mt19937_64& rng);

struct DistanceUniformData {
  ItemUniverse items;
  UnitVector query;
};

// n items (ids 0..n-1) whose distances to the returned query point are
// i.i.d. uniform on [0, 2].
DistanceUniformData gen_distance_uniform(std::size_t n, std::size_t dim, std::uint64_t seed);

struct ClusterMixtureData {
  ItemUniverse items;
  std::vector<UnitVector> centers;
  std::vector<std::uint32_t> item_cluster;  // per item index
};

// `clusters` centers with pairwise inner product -1/(clusters-1) (so types
// of different clusters never attract each other's items under truncated
// models) and items spread around them with Gaussian noise of scale
// `spread` before renormalization. Requires clusters <= dim.
ClusterMixtureData gen_cluster_mixture(std::size_t n, std::size_t dim, std::size_t clusters,
                                       double spread, std::uint64_t seed);

// A user modeled the way view histories are: the uniform mixture over m
// randomly chosen item embeddings.
UserMixture sample_user_from_items(const ItemUniverse& items, std::size_t m,
                                   std::mt19937_64& rng);

}  // namespace offerset
