#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace psl2q::cli {

/// Run one CLI invocation. Returns 0 on success, 1 on verification mismatch
/// or internal defect, 2 on malformed input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace psl2q::cli
