#include "wavectl/cli.hpp"

int main(int argc, char** argv) { return wavectl::run_cli(argc, argv); }
