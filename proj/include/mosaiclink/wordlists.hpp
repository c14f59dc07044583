#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

namespace mosaiclink {

/// Meeting-interface words dropped before username reconstruction, in their
/// published order (two entries repeat; the set view collapses them).
const std::vector<std::string>& default_ui_words();

/// default_ui_words() as a case-folded membership set.
const std::set<std::string>& default_ui_word_set();

/// Device and placeholder names that never identify a person.
const std::set<std::string>& default_generic_names();

/// Reads a one-word-per-line list; entries are trimmed and case-folded,
/// blank lines skipped. Throws ConfigError when the file cannot be read.
std::set<std::string> load_word_list(const std::filesystem::path& path);

}  // namespace mosaiclink
