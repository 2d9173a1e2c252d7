#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace syllagraph::cli {

enum class ExitCode : int {
  Success = 0,
  ValidationErrors = 1,
  ParseFailure = 2,
  IoFailure = 3,
  BadInvocation = 4,
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
  bool color = false;
};

/// Runs one command line (args excludes the program name).
ExitCode run(const std::vector<std::string>& args, const Streams& io);

/// True when stderr is a terminal and SYLLAGRAPH_NO_COLOR is unset.
bool want_color();

}  // namespace syllagraph::cli
