#include "schrscale/cli.hpp"

int main(int argc, char** argv) { return schrscale::cli::main_entry(argc, argv); }
