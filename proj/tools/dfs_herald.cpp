#include "dfsherald/cli.hpp"

int main(int argc, char** argv) { return dfs::cli::run_cli(argc, argv); }
