#include <iostream>

#include "bcn/cli.hpp"

int main(int argc, char** argv) { return bcn::run_cli(argc, argv, std::cout, std::cerr); }
