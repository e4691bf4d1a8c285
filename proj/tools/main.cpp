#include <string>
#include <vector>

#include "rydsim/cli.hpp"

int main(int argc, char** argv) {
  return rydsim::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
