#include "mmwave/cli_commands.hpp"

int main(int argc, char** argv) { return mmwave::cli::run_cli(argc, argv); }
