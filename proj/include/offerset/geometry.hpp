// Embedding-space primitives: unit vectors on the sphere, the
// distance/inner-product correspondence, and the item/user containers.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace offerset {

double dot(std::span<const double> a, std::span<const double> b);

// Distance between unit vectors with inner product `inner`:
// sqrt(2 * (1 - inner)), clamped to [0, 2].
double distance_from_inner(double inner);

/// A vector on the unit sphere. Immutable after construction.
class UnitVector {
 public:
  UnitVector() = default;

  // Scales a nonzero finite vector to unit norm.
  static UnitVector normalized(std::span<const double> raw);

  // Accepts coordinates already within `tol` of unit norm (rescaled to
  // exact unit norm), rejects anything further off.
  static UnitVector checked(std::vector<double> coords, double tol = 1e-9);

  const std::vector<double>& coords() const { return coords_; }
  std::span<const double> span() const { return coords_; }
  std::size_t dim() const { return coords_.size(); }
  double dot(const UnitVector& other) const;

  bool operator==(const UnitVector& other) const { return coords_ == other.coords_; }

 private:
  explicit UnitVector(std::vector<double> coords) : coords_(std::move(coords)) {}
  std::vector<double> coords_;
};

double distance(const UnitVector& u, const UnitVector& v);

/// The universe of offerable items: unique ids plus unit-norm embeddings of
/// a fixed dimension. Immutable once populated; safe for concurrent reads.
class ItemUniverse {
 public:
  explicit ItemUniverse(std::size_t dim);

  void add(std::uint64_t id, const UnitVector& embedding);

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return dim_; }

  std::span<const double> embedding(std::size_t index) const;
  std::span<const double> embedding_of(std::uint64_t id) const;
  UnitVector unit_vector(std::size_t index) const;
  std::uint64_t id_at(std::size_t index) const { return ids_.at(index); }
  const std::vector<std::uint64_t>& ids() const { return ids_; }
  std::optional<std::size_t> index_of(std::uint64_t id) const;
  bool contains(std::uint64_t id) const { return index_.count(id) != 0; }

 private:
  std::size_t dim_;
  std::vector<std::uint64_t> ids_;
  std::vector<double> data_;  // row-major, ids_.size() x dim_
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// A random user modeled as the uniform mixture of m unit-vector types.
class UserMixture {
 public:
  explicit UserMixture(std::vector<UnitVector> types);

  std::size_t size() const { return m_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> type(std::size_t i) const;
  UnitVector type_vector(std::size_t i) const;

 private:
  std::size_t m_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

}  // namespace offerset
