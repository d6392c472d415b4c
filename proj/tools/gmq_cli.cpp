#include <iostream>

#include "gmq/cli.hpp"

int main(int argc, char** argv) { return gmq::cli::dispatch(argc, argv, std::cout, std::cerr); }
