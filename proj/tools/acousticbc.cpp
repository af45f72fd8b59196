#include "acousticbc/cli.hpp"

int main(int argc, char** argv) { return acbc::cli_main(argc, argv); }
