#include "cli.hpp"

int main(int argc, char** argv) { return irp::cli::main_entry(argc, argv); }
