#include "cdsurface_tools/cli.hpp"

int main(int argc, char** argv) { return cdsurface::cli::run(argc, argv); }
