#include <iostream>

#include "heisweil/acceptance.hpp"

int main() {
  bool all = true;
  heisweil::acceptance::run_all([&](const heisweil::acceptance::CriterionResult& r) {
    std::cout << heisweil::acceptance::format_line(r) << std::endl;
    all = all && r.passed();
  });
  return all ? 0 : 1;
}
