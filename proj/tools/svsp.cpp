#include <iostream>

#include "svsp/cli.hpp"

int main(int argc, char** argv) { return svsp::run_cli(argc, argv, std::cout, std::cerr); }
