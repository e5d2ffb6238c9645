#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace salo {

// Flat parameter vector. All optimizer state and gradients use this alias.
using Vec = std::vector<double>;

inline bool all_finite(const Vec& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

inline void require_dim(const Vec& v, std::size_t dim, const char* what) {
  if (v.size() != dim) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch, got " +
                                std::to_string(v.size()) + ", expected " +
                                std::to_string(dim));
  }
}

inline double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace salo
