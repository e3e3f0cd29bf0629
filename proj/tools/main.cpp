#include "cli.hpp"

int main(int argc, char** argv) { return qinterp::cli::main_entry(argc, argv); }
