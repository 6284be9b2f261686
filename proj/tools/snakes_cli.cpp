#include "snakes/cli.hpp"

int main(int argc, char** argv) {
    return snakes::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
