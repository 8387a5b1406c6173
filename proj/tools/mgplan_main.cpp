#include <iostream>

#include "mgplan/cli.hpp"

int main(int argc, char** argv) {
  return mgplan::cli::main_entry(argc, argv, std::cout, std::cerr);
}
