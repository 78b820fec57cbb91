#include "offerset/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace offerset {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double distance_from_inner(double inner) {
  double sq = 2.0 * (1.0 - inner);
  if (sq < 0.0) sq = 0.0;
  return std::min(std::sqrt(sq), 2.0);
}

UnitVector UnitVector::normalized(std::span<const double> raw) {
  if (raw.empty()) throw std::invalid_argument("unit vector: empty input");
  double sq = 0.0;
  for (double x : raw) {
    if (!std::isfinite(x)) throw std::invalid_argument("unit vector: non-finite coordinate");
    sq += x * x;
  }
  if (!(sq > 0.0) || !std::isfinite(sq))
    throw std::invalid_argument("unit vector: zero or overflowing norm");
  double inv = 1.0 / std::sqrt(sq);
  std::vector<double> coords(raw.begin(), raw.end());
  for (double& x : coords) x *= inv;
  return UnitVector(std::move(coords));
}

UnitVector UnitVector::checked(std::vector<double> coords, double tol) {
  if (coords.empty()) throw std::invalid_argument("unit vector: empty input");
  double sq = 0.0;
  for (double x : coords) {
    if (!std::isfinite(x)) throw std::invalid_argument("unit vector: non-finite coordinate");
    sq += x * x;
  }
  double norm = std::sqrt(sq);
  if (std::abs(norm - 1.0) > tol)
    throw std::invalid_argument("unit vector: norm " + std::to_string(norm) +
                                " outside tolerance " + std::to_string(tol));
  double inv = 1.0 / norm;
  for (double& x : coords) x *= inv;
  return UnitVector(std::move(coords));
}

double UnitVector::dot(const UnitVector& other) const {
  return offerset::dot(coords_, other.coords_);
}

double distance(const UnitVector& u, const UnitVector& v) {
  if (u.dim() != v.dim()) throw std::invalid_argument("distance: dimension mismatch");
  return distance_from_inner(u.dot(v));
}

ItemUniverse::ItemUniverse(std::size_t dim) : dim_(dim) {
  if (dim < 2) throw std::invalid_argument("universe: dimension must be at least 2");
}

void ItemUniverse::add(std::uint64_t id, const UnitVector& embedding) {
  if (embedding.dim() != dim_)
    throw std::invalid_argument("universe: embedding dimension mismatch");
  if (!index_.emplace(id, ids_.size()).second)
    throw std::invalid_argument("universe: duplicate item id " + std::to_string(id));
  ids_.push_back(id);
  data_.insert(data_.end(), embedding.coords().begin(), embedding.coords().end());
}

std::span<const double> ItemUniverse::embedding(std::size_t index) const {
  if (index >= ids_.size()) throw std::out_of_range("universe: item index out of range");
  return {data_.data() + index * dim_, dim_};
}

std::span<const double> ItemUniverse::embedding_of(std::uint64_t id) const {
  auto it = index_.find(id);
  if (it == index_.end())
    throw std::invalid_argument("universe: unknown item id " + std::to_string(id));
  return embedding(it->second);
}

UnitVector ItemUniverse::unit_vector(std::size_t index) const {
  auto e = embedding(index);
  return UnitVector::checked(std::vector<double>(e.begin(), e.end()), 1e-6);
}

std::optional<std::size_t> ItemUniverse::index_of(std::uint64_t id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

UserMixture::UserMixture(std::vector<UnitVector> types) {
  if (types.empty()) throw std::invalid_argument("mixture: needs at least one type");
  m_ = types.size();
  dim_ = types.front().dim();
  data_.reserve(m_ * dim_);
  for (const auto& t : types) {
    if (t.dim() != dim_) throw std::invalid_argument("mixture: type dimension mismatch");
    data_.insert(data_.end(), t.coords().begin(), t.coords().end());
  }
}

std::span<const double> UserMixture::type(std::size_t i) const {
  if (i >= m_) throw std::out_of_range("mixture: type index out of range");
  return {data_.data() + i * dim_, dim_};
}

UnitVector UserMixture::type_vector(std::size_t i) const {
  auto t = type(i);
  return UnitVector::checked(std::vector<double>(t.begin(), t.end()), 1e-6);
}

}  // namespace offerset
