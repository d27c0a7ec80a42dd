// Loading the shipped library files into a signature.
//
// The lib/ directory holds plain .npt sources plus a MANIFEST index: one line
// per file, "file.npt: name1 name2 ...", in load order. Loading checks each
// file and then asserts that every listed name landed in the signature, so a
// stale manifest or a silently skipped declaration fails loudly.
#pragma once

#include <string>
#include <vector>

#include "npt/signature.hpp"

namespace npt {

struct ManifestEntry {
  std::string file;
  std::vector<std::string> names;
};

// Directory holding the library: the NPT_LIB environment variable when set
// and nonempty, otherwise `fallback`.
std::string library_dir(const std::string& fallback);

// Parses dir/MANIFEST. Throws DiagError(IoError) when the file is missing or
// a line is malformed.
std::vector<ManifestEntry> read_manifest(const std::string& dir);

// Reads, checks, and asserts one manifest entry against the signature.
void load_manifest_entry(Signature& sig, const std::string& dir,
                         const ManifestEntry& entry, long long budget);

// The prelude is the first manifest entry; the corpus is everything after it.
void load_prelude(Signature& sig, const std::string& dir, long long budget);
void load_corpus(Signature& sig, const std::string& dir, long long budget);

}  // namespace npt
