#include <iostream>

#include "uasforge/cli.hpp"

int main(int argc, char **argv) {
  return uasforge::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
