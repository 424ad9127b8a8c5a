#include <iostream>

#include "sirmeta/cli.hpp"

int main(int argc, char** argv) { return sirmeta::cli::main_entry(argc, argv, std::cout, std::cerr); }
