#pragma once

// JSON surfaces: the canonical (G,H) descriptor, character-table and
// structure-constant cache payloads. All rationals are serialized as
// strings ("num" or "num/den") so round-trips are bit-exact.

#include "rwreath/abelian.hpp"
#include "rwreath/chartab.hpp"
#include "rwreath/wreath.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace rwreath {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatVersion = "1";

inline std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

// Canonical on-disk naming of (G,H), hashed for cache keys.
inline Json group_descriptor_json(const FiniteAbelianGroup& g, const AbelianSubgroup& h) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["invariant_factors"] = g.factors();
  Json gens = Json::array();
  for (int gen : h.generators()) gens.push_back(g.decode(gen));
  j["subgroup_generators"] = std::move(gens);
  return j;
}

inline std::string group_descriptor_hash(const FiniteAbelianGroup& g, const AbelianSubgroup& h) {
  return fnv1a_hex(group_descriptor_json(g, h).dump());
}

inline Json cyclotomic_to_json(const Cyclotomic& z) {
  Json arr = Json::array();
  for (const auto& q : z.coeffs()) arr.push_back(format_rational(q));
  return arr;
}

inline Cyclotomic cyclotomic_from_json(long long conductor, const Json& arr) {
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(euler_phi(conductor)))
    throw UsageError("cyclotomic value has the wrong shape");
  std::vector<Rational> coeffs;
  coeffs.reserve(arr.size());
  for (const auto& item : arr) coeffs.push_back(parse_rational(item.get<std::string>()));
  Cyclotomic z(conductor);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    z += Cyclotomic::root_of_unity(conductor, static_cast<long long>(i)).scaled(coeffs[i]);
  return z;
}

inline Json element_to_json(const FiniteAbelianGroup& g, const WreathElement& e) {
  Json j;
  j["perm"] = e.perm;
  Json colors = Json::array();
  for (int c : e.colors) colors.push_back(g.decode(c));
  j["colors"] = std::move(colors);
  return j;
}

inline Json character_table_to_json(const FiniteAbelianGroup& g, const AbelianSubgroup& h,
                                    int degree, const RestrictedWreathGroup& grp,
                                    const CharacterTable& table) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "character_table";
  j["group"] = group_descriptor_json(g, h);
  j["degree"] = degree;
  j["order"] = table.group_order();
  j["conductor"] = table.conductor();
  j["class_sizes"] = table.class_sizes();
  Json reps = Json::array();
  for (int c = 0; c < grp.class_count(); ++c) reps.push_back(element_to_json(g, grp.class_rep(c)));
  j["class_reps"] = std::move(reps);
  Json irr = Json::array();
  for (int i = 0; i < table.row_count(); ++i) {
    Json entry;
    entry["degree"] = table.degree(i);
    Json values = Json::array();
    for (int c = 0; c < table.class_count(); ++c) values.push_back(cyclotomic_to_json(table.value(i, c)));
    entry["values"] = std::move(values);
    irr.push_back(std::move(entry));
  }
  j["irreducibles"] = std::move(irr);
  return j;
}

// Parses a cached table. Values are taken at face value; downstream
// orthogonality checks are the corruption detector.
inline CharacterTable character_table_from_json(const Json& j) {
  if (!j.is_object() || j.value("format_version", "") != kFormatVersion ||
      j.value("kind", "") != "character_table")
    throw UsageError("not a character table payload");
  long long order = j.at("order").get<long long>();
  long long conductor = j.at("conductor").get<long long>();
  std::vector<long long> sizes = j.at("class_sizes").get<std::vector<long long>>();
  std::vector<std::vector<Cyclotomic>> rows;
  for (const auto& entry : j.at("irreducibles")) {
    std::vector<Cyclotomic> row;
    for (const auto& value : entry.at("values")) row.push_back(cyclotomic_from_json(conductor, value));
    if (row.size() != sizes.size()) throw UsageError("table row has the wrong length");
    rows.push_back(std::move(row));
  }
  return CharacterTable(order, conductor, std::move(sizes), std::move(rows));
}

}  // namespace rwreath
