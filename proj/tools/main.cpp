#include <iostream>

#include "sandwich/commands.hpp"

int main(int argc, char** argv) { return sandwich::run_cli(argc, argv, std::cout, std::cerr); }
