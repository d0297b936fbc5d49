#include <iostream>

#include "nmqa/cli.hpp"

int main(int argc, char** argv) {
  return nmqa::cli_main(argc, argv, std::cout, std::cerr);
}
