#include <iostream>

#include "herglotz/cli/cli.hpp"

int main(int argc, char** argv) {
  return herglotz::run_cli(argc, argv, std::cout, std::cerr);
}
