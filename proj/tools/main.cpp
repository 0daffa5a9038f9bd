#include "cli.hpp"

int main(int argc, char** argv) { return nlpa::cli::main_cli(argc, argv); }
