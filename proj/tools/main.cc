#include <iostream>

#include "nme/cli.h"

int main(int argc, char** argv) {
  return nme::RunCli(argc, argv, std::cout, std::cerr);
}
