#include "uavsizer/cli.hpp"

int main(int argc, char** argv) { return uavsizer::cli::run(argc, argv); }
