#include <iostream>

#include "memwalk/cli.hpp"

int main(int argc, char** argv) { return memwalk::run_cli(argc, argv, std::cout, std::cerr); }
