#include <iostream>

#include "acf_cli.hpp"

int main(int argc, char** argv) {
  return acf::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
