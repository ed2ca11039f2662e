#pragma once

#include "json_util.hpp"
#include "ppk/taxonomy.hpp"

namespace ppk::detail {

/// Shape errors are SchemaError; broken invariants are TaxonomyError.
Taxonomy taxonomy_from_json(const json& j, const std::string& locus, std::string name);
json taxonomy_to_json(const Taxonomy& taxonomy);

}  // namespace ppk::detail
