#include <iostream>

#include "polarkit/cli.hpp"

int main(int argc, char** argv) { return polarkit::run_cli(argc, argv, std::cout, std::cerr); }
