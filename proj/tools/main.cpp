#include "pbip/cli.hpp"

int main(int argc, char** argv) { return pbip::cli_main(argc, argv); }
