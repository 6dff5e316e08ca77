#include "feketelab/cli.hpp"

int main(int argc, char** argv) { return feketelab::cli::run(argc, argv); }
