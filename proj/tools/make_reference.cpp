// Regenerates scenarios/reference.json from the built-in scenario.
#include <fstream>
#include <iostream>

#include "nibsim/scenario.hpp"

int main(int argc, char** argv) {
  std::string text = nibsim::serialize_scenario(nibsim::reference_scenario());
  if (argc > 1) {
    std::ofstream out(argv[1], std::ios::binary | std::ios::trunc);
    if (!out) {
      std::cerr << "cannot write " << argv[1] << '\n';
      return 1;
    }
    out << text;
    return out ? 0 : 1;
  }
  std::cout << text;
  return 0;
}
