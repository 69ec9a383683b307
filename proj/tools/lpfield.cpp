#include <string>
#include <vector>

#include "lpfield/cli.hpp"

int main(int argc, char** argv) {
  return lpfield::cli::run(std::vector<std::string>(argv, argv + argc));
}
