#include <iostream>

#include "wxbits_tools/cli.hpp"

int main(int argc, char** argv) {
  return wxbits::tools::run_cli(argc, argv, std::cout, std::cerr);
}
