#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "innk/server/registry.hpp"

namespace innk::tools {

// Plain key = value files, one setting per line, '#' starts a comment.
//
//   rounds              odd round count (5)
//   round_seconds       countdown length, fractional allowed (30)
//   threshold           NN confidence threshold in [0, 1] (0.5)
//   ink_multiplier      budget = multiplier * mean category ink (1.5)
//   words               comma-separated code words; empty = all categories
//   seed                match and room-code seed (0)
//   intermission_seconds  pause between rounds (5)
//   nn_schedule         per_stroke | per_point
//   max_players         per room (16)
//   max_rooms           per server (256)
//
// Unknown keys and unparsable values are errors.

/// Applies the settings in `in` on top of `base`. Throws ArgumentError naming
/// source and line on any problem, and validates the result.
server::ServerConfig parse_config(std::istream& in, const std::string& source,
                                  server::ServerConfig base = {});

/// Reads a config file. Throws Error if it cannot be opened.
server::ServerConfig load_config(const std::filesystem::path& path, server::ServerConfig base = {});

}  // namespace innk::tools
