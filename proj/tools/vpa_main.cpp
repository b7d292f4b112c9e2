#include <iostream>

#include "vpa/cli.hpp"

int main(int argc, char** argv) {
  return vpa::run_cli(argc, argv, std::cout, std::cerr);
}
