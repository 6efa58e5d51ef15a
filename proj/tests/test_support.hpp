#pragma once

#include <torsion/sparse_poly.hpp>

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef TORSION_DATA_DIR
#define TORSION_DATA_DIR "tests/data"
#endif

namespace testing {

inline std::string read_data(const std::string& name) {
  std::ifstream in(std::string(TORSION_DATA_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing data file " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_path(const std::string& name) {
  return std::string(TORSION_DATA_DIR) + "/" + name;
}

inline long uniform(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

// Up to `terms` terms, coefficients in [-cmax, cmax] \ {0}, exponents <= emax.
inline torsion::SparsePoly random_poly(std::mt19937_64& rng, std::size_t n, int terms, long emax,
                                       long cmax) {
  torsion::SparsePoly p(n);
  for (int t = 0; t < terms; ++t) {
    torsion::ExponentVector e(n);
    for (auto& x : e) x = uniform(rng, 0, emax);
    long c = uniform(rng, 1, cmax);
    if (rng() & 1) c = -c;
    p.add_term(e, torsion::Int(c));
  }
  return p;
}

}  // namespace testing
