#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <openssl/evp.h>

#include <nlohmann/json.hpp>

#include "cosoc/types.hpp"

namespace cosoc {

inline constexpr const char* kToolVersion = "1.0.0";

/// Lower-case hex SHA-256 of a file's bytes. Requires linking libcrypto.
inline std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "' for digest");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw IoError("SHA-256 unavailable");
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int k = 0; k < len; ++k) {
    std::array<char, 3> b{};
    std::snprintf(b.data(), b.size(), "%02x", md[k]);
    hex += b.data();
  }
  return hex;
}

/// Provenance record written next to every CLI output.
struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  std::map<std::string, std::string> parameters;
  std::vector<std::pair<std::string, std::string>> inputs;   // path, sha256
  std::vector<std::pair<std::string, std::string>> outputs;  // path, sha256

  void add_input(const std::string& path) { inputs.emplace_back(path, sha256_file(path)); }
  void add_output(const std::string& path) { outputs.emplace_back(path, sha256_file(path)); }

  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json j;
    j["tool"] = "cosoc";
    j["version"] = kToolVersion;
    j["command"] = command;
    j["arguments"] = arguments;
    j["parameters"] = parameters;
    auto& in = j["inputs"] = nlohmann::json::array();
    for (const auto& [p, d] : inputs) in.push_back({{"path", p}, {"sha256", d}});
    auto& out = j["outputs"] = nlohmann::json::array();
    for (const auto& [p, d] : outputs) out.push_back({{"path", p}, {"sha256", d}});
    return j;
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write run manifest '" + path + "'");
    out << to_json().dump(2) << '\n';
  }
};

}  // namespace cosoc
