#include "cli.hpp"

int main(int argc, char** argv) { return cq::cli::run(argc, argv); }
