#include "lognabla/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lognabla::cli_main(argc, argv, std::cout, std::cerr); }
