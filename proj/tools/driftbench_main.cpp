#include "driftbench/cli.hpp"

int main(int argc, char** argv) { return driftbench::cli_main(argc, argv); }
