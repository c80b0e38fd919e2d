#include <iostream>
#include <string>
#include <vector>

#include "bnsense/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return bnsense::cli::main_entry(args, std::cout, std::cerr);
}
