#include <iostream>

#include "floorscan/cli.hpp"

int main(int argc, char** argv) { return floorscan::run_cli(argc, argv, std::cout, std::cerr); }
