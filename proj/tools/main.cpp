#include <iostream>
#include <string>
#include <vector>

#include "dsop_app/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dsop::app::run_cli(args, std::cout, std::cerr);
}
