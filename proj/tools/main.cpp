#include "substream/cli.hpp"

int main(int argc, char** argv) { return substream::run_cli(argc, argv); }
