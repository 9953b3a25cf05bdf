#include <string>
#include <vector>

#include "lineage/cli.hpp"

int main(int argc, char** argv) {
    return lineage::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
