#include "cli.hpp"

int main(int argc, char** argv) { return coverage::cli::run(argc, argv); }
