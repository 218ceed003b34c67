#include "scldpc/cli.hpp"

int main(int argc, char** argv) { return scldpc::cli_main(argc, argv); }
