#include "persmode/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return persmode::cli::run_cli(argc, argv, std::cout, std::cerr); }
