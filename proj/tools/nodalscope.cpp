#include "cli/commands.hpp"

int main(int argc, char** argv) { return nodalscope::cli::run(argc, argv); }
