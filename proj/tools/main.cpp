#include "flowray/cli.hpp"

int main(int argc, char** argv) { return flowray::cli::run_command(argc, argv); }
