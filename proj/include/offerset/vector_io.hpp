// Vector file formats.
//
// Binary ("OSV1"): magic bytes "OSV1", then two unsigned 32-bit
// little-endian integers n and d, then n records of (unsigned 64-bit
// little-endian item id, d little-endian IEEE-754 32-bit floats).
//
// CSV alternative: header `item_id,x0,...,x{d-1}` followed by one row per
// item. `load_items` sniffs the magic and falls back to CSV.
//
// Embeddings are re-validated on load: norms within 1e-6 of 1 are silently
// rescaled (serialized single-precision drift), anything further off is
// rejected.
#pragma once

#include <iosfwd>
#include <string>

#include "offerset/geometry.hpp"

namespace offerset {

void save_items_osv(const ItemUniverse& universe, std::ostream& out);
void save_items_csv(const ItemUniverse& universe, std::ostream& out);

ItemUniverse load_items(std::istream& in);
ItemUniverse load_items_file(const std::string& path);
void save_items_file(const ItemUniverse& universe, const std::string& path);

// Reads a vector file and treats its records, in file order, as the types
// of a uniform user mixture (ids are ignored).
UserMixture load_mixture_file(const std::string& path);

}  // namespace offerset
