#include <iostream>
#include <string>
#include <vector>

#include "apfree/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return apfree::run_cli(args, std::cout, std::cerr);
}
