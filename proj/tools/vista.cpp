#include "vista/cli/commands.hpp"

int main(int argc, char** argv) { return vista::cli::run(argc, argv); }
