#include <iostream>
#include <string>
#include <vector>

#include "amann/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return amann::run_cli(args, std::cout, std::cerr);
}
