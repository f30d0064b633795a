#include <iostream>

#include "bfe/cli.hpp"

int main(int argc, char** argv) {
  return bfe::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
