#pragma once

#include <string>

namespace psilab {

// Downloads a zero-ordinate table, verifies its SHA-256 digest (skipped when
// expected_sha256 is empty), parses it for validity, and installs it as
// cache_dir/dest_name.  Returns 0 on success; throws std::runtime_error with
// a diagnostic otherwise (the partial download is discarded).
int fetch_zeros(const std::string& url, const std::string& cache_dir,
                const std::string& dest_name,
                const std::string& expected_sha256);

}  // namespace psilab
