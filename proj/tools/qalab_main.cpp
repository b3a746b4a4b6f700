#include <iostream>
#include <string>
#include <vector>

#include "qalab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qalab::run_cli(args, std::cout, std::cerr);
}
