#include "vmoser/cli.hpp"

int main(int argc, char** argv) { return vmoser::cli::run(argc, argv); }
