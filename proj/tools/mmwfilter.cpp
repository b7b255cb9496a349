#include "mmw/cli.hpp"

int main(int argc, char** argv) { return mmw::cli::dispatch(argc, argv); }
