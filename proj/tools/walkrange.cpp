#include <iostream>
#include <string>
#include <vector>

#include "walkrange/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return walkrange::run_cli(args, std::cout, std::cerr);
}
