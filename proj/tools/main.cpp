#include "cli.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rarc::cli::main_entry(args, std::getenv("RARC_SEED"), std::cout, std::cerr);
}
