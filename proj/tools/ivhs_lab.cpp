#include "cli.hpp"

int main(int argc, char** argv) { return ivhs::cli::run_cli(argc, argv); }
