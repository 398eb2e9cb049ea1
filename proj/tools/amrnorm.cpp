#include <iostream>

#include "amrnorm/cli.hpp"

int main(int argc, char** argv) { return amrnorm::run_cli(argc, argv, std::cout, std::cerr); }
