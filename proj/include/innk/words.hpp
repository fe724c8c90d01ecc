#pragma once

#include <string>
#include <string_view>

namespace innk {

/// Canonical form of a category word or guess: ASCII-lowercased, trimmed, and
/// with internal whitespace runs collapsed to a single space. Every word
/// comparison in the game goes through this.
std::string canonical_word(std::string_view text);

}  // namespace innk
