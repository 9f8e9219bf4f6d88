#ifndef PERMSOLVE_JSON_IO_HPP
#define PERMSOLVE_JSON_IO_HPP

#include <string>
#include <string_view>

#include <json.hpp>

#include "permsolve/filters.hpp"
#include "permsolve/permutation.hpp"

namespace permsolve {

using Json = nlohmann::ordered_json;

/// Serializes with every floating-point number rendered as %.17g, so doubles
/// round-trip bit-exactly. Non-finite numbers are rejected.
std::string dump_json(const Json& j, int indent = -1);

/// Parses text; malformed input raises ParseError with the byte offset.
Json parse_json(std::string_view text);

Json to_json(const FilterMatrix& m);
FilterMatrix filter_matrix_from_json(const Json& j);

Json to_json(const PermutationSequence& s);
PermutationSequence permutation_sequence_from_json(const Json& j);

std::string serialize(const PermutationSequence& s);
PermutationSequence deserialize_sequence(std::string_view document);

}  // namespace permsolve

#endif  // PERMSOLVE_JSON_IO_HPP
