#include "offerset/vector_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "offerset/errors.hpp"
#include "offerset/serialize.hpp"

namespace offerset {

namespace {

constexpr double kIngestNormTol = 1e-6;

UnitVector validate_row(std::vector<double> coords, std::uint64_t id) {
  for (double x : coords) {
    if (!std::isfinite(x))
      throw FormatError("item " + std::to_string(id) + ": non-finite coordinate");
  }
  double sq = 0.0;
  for (double x : coords) sq += x * x;
  double norm = std::sqrt(sq);
  if (std::abs(norm - 1.0) > kIngestNormTol)
    throw FormatError("item " + std::to_string(id) + ": norm " + std::to_string(norm) +
                      " not within 1e-6 of unit");
  double inv = 1.0 / norm;
  for (double& x : coords) x *= inv;
  return UnitVector::checked(std::move(coords), 1e-9);
}

ItemUniverse load_osv(std::istream& in) {
  // Magic already consumed by the sniffer.
  auto read_u32 = [&in]() {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw FormatError("truncated header");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  };
  std::uint32_t n = read_u32();
  std::uint32_t d = read_u32();
  if (d < 2) throw FormatError("vector file: dimension must be at least 2");

  ItemUniverse universe(d);
  std::vector<unsigned char> record(8 + 4ull * d);
  for (std::uint32_t i = 0; i < n; ++i) {
    in.read(reinterpret_cast<char*>(record.data()), static_cast<std::streamsize>(record.size()));
    if (!in) throw FormatError("truncated payload at record " + std::to_string(i));
    std::uint64_t id = 0;
    for (int b = 0; b < 8; ++b) id |= static_cast<std::uint64_t>(record[b]) << (8 * b);
    std::vector<double> coords(d);
    for (std::uint32_t j = 0; j < d; ++j) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b)
        bits |= static_cast<std::uint32_t>(record[8 + 4 * j + b]) << (8 * b);
      float f;
      std::memcpy(&f, &bits, 4);
      coords[j] = static_cast<double>(f);
    }
    universe.add(id, validate_row(std::move(coords), id));
  }
  return universe;
}

ItemUniverse load_csv(std::istream& in, std::string first_line) {
  if (first_line.rfind("item_id", 0) != 0)
    throw FormatError("vector file: unknown format (neither OSV1 magic nor CSV header)");
  std::size_t d = 0;
  for (char ch : first_line)
    if (ch == ',') ++d;
  if (d < 2) throw FormatError("vector CSV: dimension must be at least 2");

  ItemUniverse universe(d);
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    if (!std::getline(ss, field, ',')) continue;
    std::uint64_t id = 0;
    try {
      id = std::stoull(field);
    } catch (const std::exception&) {
      throw FormatError("vector CSV line " + std::to_string(lineno) + ": bad item id");
    }
    std::vector<double> coords;
    coords.reserve(d);
    while (std::getline(ss, field, ',')) {
      char* end = nullptr;
      double v = std::strtod(field.c_str(), &end);
      if (end == field.c_str())
        throw FormatError("vector CSV line " + std::to_string(lineno) + ": bad coordinate");
      coords.push_back(v);
    }
    if (coords.size() != d)
      throw FormatError("vector CSV line " + std::to_string(lineno) + ": expected " +
                        std::to_string(d) + " coordinates");
    universe.add(id, validate_row(std::move(coords), id));
  }
  return universe;
}

}  // namespace

void save_items_osv(const ItemUniverse& universe, std::ostream& out) {
  BinaryWriter w;
  w.magic("OSV1");
  w.u32(static_cast<std::uint32_t>(universe.size()));
  w.u32(static_cast<std::uint32_t>(universe.dim()));
  for (std::size_t i = 0; i < universe.size(); ++i) {
    w.u64(universe.id_at(i));
    for (double x : universe.embedding(i)) w.f32(static_cast<float>(x));
  }
  const auto& bytes = w.bytes();
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

void save_items_csv(const ItemUniverse& universe, std::ostream& out) {
  out << "item_id";
  for (std::size_t j = 0; j < universe.dim(); ++j) out << ",x" << j;
  out << "\n";
  char buf[64];
  for (std::size_t i = 0; i < universe.size(); ++i) {
    out << universe.id_at(i);
    for (double x : universe.embedding(i)) {
      std::snprintf(buf, sizeof(buf), "%.17g", x);
      out << ',' << buf;
    }
    out << "\n";
  }
}

ItemUniverse load_items(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() == 4 && std::memcmp(magic, "OSV1", 4) == 0) return load_osv(in);
  // Not binary: re-assemble the first line and parse as CSV.
  std::string first(magic, magic + in.gcount());
  in.clear();
  std::string rest;
  std::getline(in, rest);
  first += rest;
  while (!first.empty() && (first.back() == '\r' || first.back() == '\n')) first.pop_back();
  return load_csv(in, first);
}

ItemUniverse load_items_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open vector file: " + path);
  return load_items(in);
}

void save_items_file(const ItemUniverse& universe, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write vector file: " + path);
  save_items_osv(universe, out);
}

UserMixture load_mixture_file(const std::string& path) {
  ItemUniverse universe = load_items_file(path);
  if (universe.size() == 0) throw FormatError("mixture file has no records: " + path);
  std::vector<UnitVector> types;
  types.reserve(universe.size());
  for (std::size_t i = 0; i < universe.size(); ++i) types.push_back(universe.unit_vector(i));
  return UserMixture(std::move(types));
}

}  // namespace offerset
