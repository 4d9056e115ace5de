#include "lrfr/cli.hpp"

int main(int argc, char** argv) { return lrfr::run_cli(argc, argv); }
