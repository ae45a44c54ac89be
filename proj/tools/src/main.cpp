#include <iostream>

#include "gmlab_cli/commands.hpp"

int main(int argc, char** argv) { return gmlab::cli::run_cli(argc, argv, std::cout, std::cerr); }
