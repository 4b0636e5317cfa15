#include "dixmier/cli.hpp"

int main(int argc, char** argv) { return dixmier::cli::run(argc, argv); }
