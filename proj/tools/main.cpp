#include <iostream>
#include <string>
#include <vector>

#include "ordstat/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ordstat::run_cli(args, std::cout, std::cerr);
}
