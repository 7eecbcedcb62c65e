#include "regresslab/cli.hpp"

int main(int argc, char** argv) {
    return regresslab::cli::run(argc, argv);
}
