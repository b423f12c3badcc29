#pragma once

#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "tvs/extraction.hpp"
#include "tvs/gf_linalg.hpp"
#include "tvs/gridset.hpp"
#include "tvs/lss.hpp"
#include "tvs/variety.hpp"

namespace tvs {

using json = nlohmann::ordered_json;

/// Lowercase hex of the cell bitset: byte k holds cells 8k..8k+7, least
/// significant bit first, and each byte is written high nibble first.
std::string to_hex(const GridSet& g);
GridSet gridset_from_hex(const Ambient2& ambient, std::string_view hex);

json to_json(const Subspace& s);
Subspace subspace_from_json(const json& j);

json to_json(const GridSet& g);
GridSet gridset_from_json(const json& j);

json to_json(const TransverseSet& t);
/// Validates transversality; throws NotTransverse.
TransverseSet transverse_from_json(const json& j);

json to_json(const LinearSubspaceSystem& s);
LinearSubspaceSystem lss_from_json(const json& j);

json to_json(const BilinearVariety& w);
BilinearVariety variety_from_json(const json& j);

json to_json(const QuasirandomnessProfile& q);
json to_json(const ContainmentCertificate& c);
/// Everything except wall-clock time, which goes under "timing".
json to_json(const ExtractionReport& r, const std::string& input_digest);

/// Either file kind: a GridSet ("cells") or a TransverseSet ("columns").
using SetFile = std::variant<GridSet, TransverseSet>;
SetFile parse_set(std::string_view text);
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view text);

std::string sha256_hex(std::string_view data);

}  // namespace tvs
