#include "jumpfd/cli.hpp"

int main(int argc, char** argv) { return jumpfd::run_cli(argc, argv); }
