#pragma once

#include <filesystem>
#include <istream>
#include <vector>

#include "mosaiclink/types.hpp"

namespace mosaiclink {

/// Parses a JSONL post manifest: one object per line with post_id, source
/// ("twitter" | "instagram" | "other"), image_path, and optional tags. Blank
/// lines are skipped. Malformed lines raise ManifestError with the 1-based
/// line number; a repeated post_id raises DuplicatePostError.
std::vector<PostRecord> parse_manifest(std::istream& in);

/// parse_manifest over a file. An unreadable file raises ManifestError.
std::vector<PostRecord> ingest_manifest(const std::filesystem::path& path);

}  // namespace mosaiclink
