#include "belllab/cli.hpp"

int main(int argc, char** argv) { return belllab::cli::run_cli(argc, argv); }
