#include <iostream>

#include "npt/cli.hpp"

int main(int argc, char** argv) {
  return npt::run_cli(argc, argv, std::cin, std::cout, std::cerr);
}
