#include <iostream>

#include "nbody_cli/commands.hpp"

int main(int argc, char** argv) {
  return nbody::cli::run_cli(argc, argv, std::cout, std::cerr);
}
