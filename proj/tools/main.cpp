#include "branchtree/cli.hpp"

int main(int argc, char** argv) {
    return branchtree::cli::run_main(argc, argv);
}
