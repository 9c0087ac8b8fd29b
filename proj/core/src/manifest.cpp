#include "dine/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dine {

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for hashing: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(h));
  return hex;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  nlohmann::json j{{"command", manifest.command},
                   {"argv", manifest.argv},
                   {"config", nlohmann::json::parse(manifest.config_json)},
                   {"seed", manifest.seed},
                   {"input_hashes", manifest.input_hashes},
                   {"tool_version", manifest.tool_version}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  nlohmann::json j;
  in >> j;
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.argv = j.at("argv").get<std::vector<std::string>>();
  m.config_json = j.at("config").dump();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.input_hashes =
      j.at("input_hashes").get<std::map<std::string, std::string>>();
  m.tool_version = j.at("tool_version").get<std::string>();
  return m;
}

std::string manifest_path_for(const std::string& output_path) {
  return output_path + ".manifest.json";
}

}  // namespace dine
