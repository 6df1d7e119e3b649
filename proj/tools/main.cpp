#include "shortsieve/cli.hpp"

int main(int argc, char** argv) { return shortsieve::cli::run_main(argc, argv); }
