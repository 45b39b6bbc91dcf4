#include "karoubi/cli.hpp"

int main(int argc, char** argv) { return karoubi::cli::run(argc, argv); }
