#include <iostream>

#include "menon/cli.hpp"

int main(int argc, char** argv) { return menon::run_cli(argc, argv, std::cout, std::cerr); }
