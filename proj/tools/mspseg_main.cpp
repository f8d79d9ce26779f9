#include <iostream>

#include "mspseg/cli.hpp"

int main(int argc, char** argv) { return mspseg::run_cli(argc, argv, std::cout, std::cerr); }
