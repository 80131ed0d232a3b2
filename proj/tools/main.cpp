#include "deco/cli.hpp"

int main(int argc, char** argv) { return deco::cli::run(argc, argv, std::cout, std::cerr); }
