#include <iostream>

#include "qkd/cli/commands.hpp"

int main(int argc, char** argv) { return qkd::cli::main_entry(argc, argv, std::cout, std::cerr); }
