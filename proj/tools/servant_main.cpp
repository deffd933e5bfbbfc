#include <iostream>
#include <string>
#include <vector>

#include "servant/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return servant::cli::run(args, std::cin, std::cout, std::cerr);
}
