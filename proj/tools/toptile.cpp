#include <iostream>

#include "toptile/cli.hpp"

int main(int argc, char** argv) {
  return toptile::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
