#include <iostream>

#include "autorvo/cli_commands.hpp"

int main(int argc, char** argv) { return autorvo::cli::main_entry(argc, argv, std::cout, std::cerr); }
