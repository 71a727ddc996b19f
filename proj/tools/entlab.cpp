#include <iostream>

#include "entlab/cli/commands.hpp"

int main(int argc, char** argv) { return entlab::cli::main_entry(argc, argv, std::cout, std::cerr); }
