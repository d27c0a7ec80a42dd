#include "npt/loader.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "npt/diagnostics.hpp"
#include "npt/surface.hpp"

namespace npt {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string library_dir(const std::string& fallback) {
  const char* env = std::getenv("NPT_LIB");
  if (env != nullptr && *env != '\0') return env;
  return fallback;
}

std::vector<ManifestEntry> read_manifest(const std::string& dir) {
  std::string path = dir + "/MANIFEST";
  std::string text = read_file(path);
  std::vector<ManifestEntry> out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      fail(ErrorCode::IoError, "malformed manifest line in '" + path + "': " + line);
    ManifestEntry e;
    e.file = line.substr(0, colon);
    std::istringstream names(line.substr(colon + 1));
    std::string n;
    while (names >> n) e.names.push_back(n);
    if (e.file.empty() || e.names.empty())
      fail(ErrorCode::IoError, "malformed manifest line in '" + path + "': " + line);
    out.push_back(std::move(e));
  }
  if (out.empty()) fail(ErrorCode::IoError, "empty manifest '" + path + "'");
  return out;
}

void load_manifest_entry(Signature& sig, const std::string& dir,
                         const ManifestEntry& entry, long long budget) {
  std::string path = dir + "/" + entry.file;
  surface::check_source(sig, read_file(path), entry.file, budget);
  for (const std::string& n : entry.names)
    if (!sig.has(n))
      fail(ErrorCode::UnboundName,
           "after loading '" + entry.file + "', the listed name '" + n +
               "' is not in the signature");
}

void load_prelude(Signature& sig, const std::string& dir, long long budget) {
  auto manifest = read_manifest(dir);
  load_manifest_entry(sig, dir, manifest.front(), budget);
}

void load_corpus(Signature& sig, const std::string& dir, long long budget) {
  auto manifest = read_manifest(dir);
  if (!sig.has(manifest.front().names.front()))
    fail(ErrorCode::IoError, "the prelude must be loaded before the corpus");
  for (std::size_t i = 1; i < manifest.size(); ++i)
    load_manifest_entry(sig, dir, manifest[i], budget);
}

}  // namespace npt
