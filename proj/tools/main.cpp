#include <vector>

#include "tabml/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tabml::cli::dispatch(args);
}
