#pragma once

#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "psilab/chebyshev_psi.hpp"
#include "psilab/zero_table.hpp"

namespace testutil {

inline std::filesystem::path table_path() {
  if (const char* env = std::getenv("PSILAB_TABLE")) return env;
  for (const char* p : {"data/zeros_100k.txt", "../data/zeros_100k.txt",
                        "../../data/zeros_100k.txt"}) {
    if (std::filesystem::exists(p)) return p;
  }
  throw std::runtime_error("bundled zero table not found; set PSILAB_TABLE");
}

inline const psilab::ZeroTable& bundled_table() {
  static psilab::ZeroTable table = psilab::load_zero_table(table_path());
  return table;
}

// shared small series so each test file does not re-sieve
inline const psilab::PsiSeries& series_1e5() {
  static psilab::PsiSeries s = psilab::build_psi_series(100000);
  return s;
}

}  // namespace testutil
