#include "colorquant/cli.hpp"

int main(int argc, char** argv) { return cq::run_cli(argc, argv); }
