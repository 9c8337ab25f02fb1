#include <iostream>

#include "padic_dispersion/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return padic::cli::main_entry(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
