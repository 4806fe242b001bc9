#include <iostream>

#include "brwss/cli.hpp"

int main(int argc, char** argv) {
  return brwss::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
