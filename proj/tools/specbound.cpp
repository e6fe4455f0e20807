#include <iostream>
#include <string>
#include <vector>

#include "specbound/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return specbound::run_cli(args, std::cout, std::cerr);
}
