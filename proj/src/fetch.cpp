#include "psilab/fetch.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <openssl/evp.h>

#include "psilab/zero_table.hpp"

namespace psilab {

namespace {

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

int fetch_zeros(const std::string& url, const std::string& cache_dir,
                const std::string& dest_name,
                const std::string& expected_sha256) {
  const auto slash = url.find('/', url.find("//") + 2);
  if (url.find("//") == std::string::npos)
    throw std::runtime_error("fetch: url must be http(s)://host[:port]/path");
  const std::string base = slash == std::string::npos ? url : url.substr(0, slash);
  const std::string path = slash == std::string::npos ? "/" : url.substr(slash);

  httplib::Client client(base);
  client.set_follow_location(true);
  auto res = client.Get(path);
  if (!res)
    throw std::runtime_error("fetch: no response from " + base);
  if (res->status != 200)
    throw std::runtime_error("fetch: HTTP status " +
                             std::to_string(res->status) + " from " + url);

  if (!expected_sha256.empty()) {
    const std::string got = sha256_hex(res->body);
    if (got != lower(expected_sha256))
      throw std::runtime_error("fetch: digest mismatch (got " + got +
                               "), file discarded");
  }

  namespace fs = std::filesystem;
  fs::create_directories(cache_dir);
  const fs::path tmp = fs::path(cache_dir) / (dest_name + ".part");
  const fs::path final_path = fs::path(cache_dir) / dest_name;
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("fetch: cannot write " + tmp.string());
    f << res->body;
  }
  try {
    load_zero_table(tmp);  // parse validation before install
  } catch (const std::exception& e) {
    fs::remove(tmp);
    throw std::runtime_error(std::string("fetch: table validation failed: ") +
                             e.what());
  }
  fs::rename(tmp, final_path);
  return 0;
}

}  // namespace psilab
