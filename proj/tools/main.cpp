#include "vls/cli.hpp"

int main(int argc, char** argv) { return vls::cli::run(argc, argv); }
