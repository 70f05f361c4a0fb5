#include "cli.hpp"

int main(int argc, char** argv) { return bridgerank::cli::dispatch(argc, argv); }
