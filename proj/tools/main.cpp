#include "cli.hpp"

int main(int argc, char** argv) { return logevo::cli::run(argc, argv); }
