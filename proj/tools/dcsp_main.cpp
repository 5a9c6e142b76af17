#include "dcsp/experiments.hpp"

int main(int argc, char** argv) { return dcsp::cli_main(argc, argv); }
