#pragma once

#include <iosfwd>
#include <string>

#include "manynet/game.hpp"

namespace manynet {

/// Parses the line-oriented game description format (see README for the
/// schema). Statement ids are assigned in declaration order; statements with
/// a `win` effect become winning statements. Throws std::runtime_error with
/// the offending line number on malformed input.
GameSpec parseGameSpec(std::istream& in);
GameSpec parseGameSpec(const std::string& text);

/// Canonical textual form; parseGameSpec(formatGameSpec(spec)) reproduces
/// the same program.
std::string formatGameSpec(const GameSpec& spec);

} // namespace manynet
