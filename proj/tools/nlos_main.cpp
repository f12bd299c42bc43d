#include "nlos/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return nlos::cli::run_app(argc, argv, std::cout, std::cerr); }
