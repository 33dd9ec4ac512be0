#include "cgl/cli.hpp"

int main(int argc, char** argv) { return cgl::cli::run(argc, argv); }
