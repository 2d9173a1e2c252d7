#include <iostream>
#include <string>
#include <vector>

#include "syllagraph/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  syllagraph::cli::Streams io{std::cout, std::cerr, syllagraph::cli::want_color()};
  return static_cast<int>(syllagraph::cli::run(args, io));
}
