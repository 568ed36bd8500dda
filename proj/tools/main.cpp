#include <iostream>
#include <string>
#include <vector>

#include "tableaux/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return tableaux::runCli(args, std::cout, std::cerr, std::cin);
}
