#include "dpnls/cli.hpp"

int main(int argc, char** argv) { return dpnls::cli::main_entry(argc, argv); }
