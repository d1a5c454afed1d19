#include <iostream>

#include "cliquefactor/cli.hpp"

int main(int argc, char** argv) {
  return cliquefactor::cli::dispatch(argc, argv, std::cout, std::cerr);
}
