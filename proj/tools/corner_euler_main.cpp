#include "corner_euler/cli.hpp"

int main(int argc, char** argv) { return corner_euler::cli::main(argc, argv); }
