#include <iostream>

#include "mzi/cli_app.hpp"

int main(int argc, char** argv) {
  return mzi::cli::run(argc, argv, std::cout, std::cerr);
}
