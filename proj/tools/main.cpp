#include <iostream>

#include "evs/cli.hpp"

int main(int argc, char** argv) {
  return evs::execute(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
