#include <iostream>

#include "vpsim/cli.hpp"

int main(int argc, char** argv) {
  return vpsim::run(argc, argv, std::cout, std::cerr);
}
