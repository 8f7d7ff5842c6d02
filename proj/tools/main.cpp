#include "msfa/cli_app.hpp"

int main(int argc, char** argv) { return msfa::run_cli(argc, argv); }
