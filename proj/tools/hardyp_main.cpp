#include "hardyp/cli.hpp"

int main(int argc, char** argv) { return hardyp::run_cli(argc, argv); }
