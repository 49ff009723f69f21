#include <iostream>

#include "pandora/cli.hpp"

int main(int argc, char** argv) { return pandora::run_cli(argc, argv, std::cout, std::cerr); }
