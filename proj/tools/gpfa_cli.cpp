#include "cli.hpp"

int main(int argc, char** argv) { return gpfa::cli::run(argc, argv); }
