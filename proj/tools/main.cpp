#include "tcplan/cli.hpp"

int main(int argc, char** argv) { return tcplan::cli_main(argc, argv); }
