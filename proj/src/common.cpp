#include "qiup/common.hpp"

namespace qiup {

std::vector<double> uniform_phase_grid(std::size_t n) {
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = two_pi * static_cast<double>(i) / static_cast<double>(n);
  return grid;
}

}  // namespace qiup
