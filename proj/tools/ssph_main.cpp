#include "ssph/cli/cli.hpp"

int main(int argc, char **argv) { return ssph::cli::cli_main(argc, argv); }
