#pragma once

#include <string>
#include <string_view>

#include "subsse/types.hpp"

namespace subsse {

std::string hex_encode(ByteView data);
/// Throws MalformedRequest on odd length or non-hex characters.
Bytes hex_decode(std::string_view hex);

std::string base64_encode(ByteView data);
/// Throws MalformedRequest on invalid input.
Bytes base64_decode(std::string_view text);

}  // namespace subsse
