#include "freefield/cli.hpp"

int main(int argc, char** argv) { return freefield::cli::run_main(argc, argv); }
