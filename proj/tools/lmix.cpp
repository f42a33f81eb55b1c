#include <iostream>
#include <string>
#include <vector>

#include "lmix/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lmix::run_cli(args, std::cout, std::cerr);
}
