#include "cli.hpp"

int main(int argc, char** argv) { return hamoracle::cli::run(argc, argv); }
