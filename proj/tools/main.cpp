#include "ttroute/cli.hpp"

int main(int argc, char** argv) { return ttroute::run_cli(argc, argv); }
