#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mrange::cli {

// args excludes the program name. Writes one JSON document to `out`.
// Exit status: 0 success, 2 when a test command computed a false verdict,
// 1 on error (an {"error": ...} object is written instead).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mrange::cli
