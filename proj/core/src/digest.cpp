#include "bscan/digest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace bscan {

std::string git_blob_sha1(std::string_view content) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1) {
    throw std::runtime_error("git_blob_sha1: digest init failed");
  }
  std::string prefix = "blob " + std::to_string(content.size());
  prefix.push_back('\0');
  if (EVP_DigestUpdate(ctx.get(), prefix.data(), prefix.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), content.data(), content.size()) != 1) {
    throw std::runtime_error("git_blob_sha1: digest update failed");
  }
  unsigned char raw[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), raw, &len) != 1) {
    throw std::runtime_error("git_blob_sha1: digest final failed");
  }
  std::string hex(2 * len, '0');
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(hex.data() + 2 * i, 3, "%02x", raw[i]);
  }
  return hex;
}

std::string git_blob_sha1_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  if (is.bad()) throw std::runtime_error("read failed for " + path.string());
  return git_blob_sha1(buf.str());
}

}  // namespace bscan
