#include <iostream>

#include "rrb/cli.hpp"

int main(int argc, char** argv) { return rrb::cli::dispatch(argc, argv, std::cout, std::cerr); }
