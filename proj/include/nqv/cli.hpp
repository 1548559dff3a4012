#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nqv/term.hpp"

namespace nqv::cli {

enum ExitCode : int { ok = 0, check_failed = 1, usage = 2, capped = 3 };

/// Whitespace- or comma-separated "name/arity" items; "%" comments to end of line.
/// Throws std::invalid_argument on a malformed item.
Signature parse_signature(std::string_view text);

/// Runs one command line (without the program name). Output is a pure
/// function of the arguments and the files they name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nqv::cli
