#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dine {

// Reproducibility record written alongside every artifact-producing CLI
// command: the exact invocation, the resolved configuration, the seed and
// content digests of every input.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::string config_json;  // resolved parameter snapshot, serialized
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_hashes;
  std::string tool_version;
};

// FNV-1a 64-bit digest of the file contents, as 16 hex characters.
std::string file_digest(const std::string& path);

void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest read_manifest(const std::string& path);

// Companion manifest path for a primary output.
std::string manifest_path_for(const std::string& output_path);

}  // namespace dine
