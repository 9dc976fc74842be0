#include <iostream>

#include "mcloop/cli/app.hpp"

int main(int argc, char** argv) {
  return mcloop::cli::run(argc, argv, std::cout, std::cerr);
}
