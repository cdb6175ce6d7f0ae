#include <iostream>

#include "pbg/cli.hpp"

int main(int argc, char** argv) { return pbg::run_cli(argc, argv, std::cout, std::cerr); }
