#include <iostream>
#include <string>
#include <vector>

#include "fockdens/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fockdens::run_cli(args, std::cout, std::cerr);
}
