#include "vvlab/cli.hpp"

int main(int argc, char** argv) {
    return vvlab::cli::run_cli(argc, argv);
}
