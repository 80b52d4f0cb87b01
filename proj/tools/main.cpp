#include <iostream>
#include <string>
#include <vector>

#include "psl2q/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return psl2q::cli::run(args, std::cout, std::cerr);
}
