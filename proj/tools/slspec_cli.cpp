#include "slspec/config.hpp"

int main(int argc, char** argv) { return slspec::cli_main(argc, argv); }
