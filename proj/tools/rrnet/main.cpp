#include <iostream>
#include <string>
#include <vector>

#include "rrnet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rrnet::run_cli(args, std::cout, std::cerr);
}
