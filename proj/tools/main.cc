#include <iostream>

#include "cli.h"

int main(int argc, char** argv) {
  return rotspace::cli::Run(argc, argv, std::cin, std::cout, std::cerr);
}
