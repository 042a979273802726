#include "edbsw/cli.hpp"

int main(int argc, char** argv) { return edbsw::cli::run(argc, argv); }
