#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return bawcav::cli::run_cli(argc, argv, std::cout, std::cerr); }
