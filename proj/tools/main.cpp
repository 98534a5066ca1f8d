#include "surfmeas/cli.hpp"

int main(int argc, char **argv) { return surfmeas::runCli(argc, argv); }
