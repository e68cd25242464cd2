#include "sailfit/cli.hpp"

int main(int argc, char** argv) {
    return sailfit::run_cli(argc, argv);
}
