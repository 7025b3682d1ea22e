#pragma once

// Validation against the JSON Schemas shipped in core/schemas/. Supports the
// keyword subset those files use: type, properties, required,
// additionalProperties, items, enum, const, minimum, maximum,
// minItems, maxItems, minLength, pattern, anyOf and "$ref" to
// "#/$defs/<name>", "<file>.schema.json" or "<file>.schema.json#/$defs/<name>".

#include <string>
#include <string_view>
#include <vector>

#include "wxbits/game.hpp"

namespace wxbits {

// Names of the compiled-in schemas ("submission", "game", ...).
std::vector<std::string> schema_names();
// Throws ValidationError for an unknown name.
const Json& schema(std::string_view name);

// Empty when valid; otherwise one message per violation, prefixed with the
// JSON pointer of the offending value.
std::vector<std::string> schema_errors(const Json& document, const Json& schema);
// Throws ValidationError listing the first violations.
void validate_against(const Json& document, std::string_view schema_name);

}  // namespace wxbits
