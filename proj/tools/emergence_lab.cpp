#include <iostream>
#include <string>
#include <vector>

#include "emergence/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return emergence::cli::run(args, std::cout, std::cerr);
}
