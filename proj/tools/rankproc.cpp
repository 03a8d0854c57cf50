#include <iostream>

#include "rankproc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rankproc::cli::run(args, std::cout, std::cerr);
}
