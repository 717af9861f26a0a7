#include <iostream>

#include "diagseq/cli.hpp"

int main(int argc, char** argv) { return diagseq::dispatch(argc, argv, std::cout, std::cerr); }
