#include <iostream>
#include <string>
#include <vector>

#include "rscatter_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rscatter::cli::main(args, std::cout, std::cerr);
}
