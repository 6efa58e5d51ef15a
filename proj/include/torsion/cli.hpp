#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace torsion::cli {

// Exit codes.
inline constexpr int kYes = 0;
inline constexpr int kNo = 1;
inline constexpr int kError = 2;  // also: inconclusive
inline constexpr int kFailed = 3;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace torsion::cli
