#include "motifscope/cli.hpp"

int main(int argc, char** argv) { return motifscope::cli::run(argc, argv); }
