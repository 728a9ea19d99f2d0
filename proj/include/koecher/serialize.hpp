#pragma once

#include <string>

#include <json.hpp>

#include "koecher/elliptic_curves.hpp"
#include "koecher/matching.hpp"
#include "koecher/perfect_forms.hpp"

namespace koecher {

using Json = nlohmann::json;

void to_json(Json& j, const OElt& x);
void from_json(const Json& j, OElt& x);
void to_json(Json& j, const FElt& x);  // coefficients as rational strings
void from_json(const Json& j, FElt& x);
void to_json(Json& j, const Mat2& m);
void from_json(const Json& j, Mat2& m);
void to_json(Json& j, const Ideal& a);  // HNF rows, generator and norm
void from_json(const Json& j, Ideal& a);
void to_json(Json& j, const PrimeIdeal& p);
void from_json(const Json& j, PrimeIdeal& p);
void to_json(Json& j, const Curve& e);
void from_json(const Json& j, Curve& e);

Json fan_to_json(const FanDatabase& fan);
FanDatabase fan_from_json(const Json& j);

Json curves_to_json(const SearchResult& r);
/// The isomorphism classes of a curves file.
std::vector<CurveClass> classes_from_json(const Json& j);

Json packet_to_json(const Eigenpacket& p);
Eigenpacket packet_from_json(const Json& j);
Json report_to_json(const MatchReport& r);

/// Hex SHA-256 of a string.
std::string sha256_hex(const std::string& data);

}  // namespace koecher
