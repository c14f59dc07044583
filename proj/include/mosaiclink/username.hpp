#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mosaiclink/geometry.hpp"

namespace mosaiclink {

// A single recognized word from the scene-text stage.
struct WordToken {
    std::string text;  // non-empty, no interior whitespace
    BoundingBox box;
    std::optional<double> confidence;  // [0,1] when present

    bool operator==(const WordToken&) const = default;
};

// One reconstructed username: space-joined words in left-to-right order.
struct UsernameCandidate {
    std::string text;
    BoundingBox box;  // union of member token boxes
    int word_count = 1;
    bool generic = false;

    bool operator==(const UsernameCandidate&) const = default;
};

struct NormalizedUsername {
    std::string text;
    bool generic = false;

    bool operator==(const NormalizedUsername&) const = default;
};

/// ASCII-lowercases a string. Non-ASCII bytes pass through unchanged.
std::string fold_case(std::string_view s);

/// Drops tokens whose case-folded text appears in either word set; the
/// surviving tokens keep their order and text. Both sets are expected to hold
/// case-folded entries (load_word_list folds on read).
std::vector<WordToken> filter_tokens(const std::vector<WordToken>& tokens,
                                     const std::set<std::string>& ui_words,
                                     const std::set<std::string>& dictionary);

/// Joins spatially adjacent words into multi-word usernames.
///
/// Runs in passes. Within a pass, tokens are visited in reading order
/// (ascending y, then x); each unconsumed token looks for the unconsumed
/// token whose top-left corner is nearest its own top-right corner, and the
/// two merge when that distance is at most `threshold` pixels. Merged tokens
/// re-enter the pool for the next pass; passes repeat until one performs no
/// merge. Merged text always reads in ascending-x order and the box is the
/// union of the member boxes. Ties (equal distance, equal reading-order keys)
/// break on smaller x, then y, then lexicographic text, so the result does
/// not depend on input order.
std::vector<UsernameCandidate> merge_word_tokens(const std::vector<WordToken>& tokens,
                                                 double threshold = 10.0);

/// Case-folds, trims, and collapses internal whitespace runs to single
/// spaces; flags the result as generic when it appears in `generic_names`
/// (device names and similar non-identifying strings).
NormalizedUsername normalize_username(const std::string& raw,
                                      const std::set<std::string>& generic_names);

inline constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

/// Pairs username candidates with face boxes from the same collage.
///
/// Candidates are visited in reading order. Each takes the not-yet-claimed
/// face whose box center lies at or above the top edge of the username box
/// and is nearest the username box center (ties go to the lowest face
/// index). Returns one entry per candidate: the claimed face index, or
/// kUnassigned when no eligible face remains.
std::vector<std::size_t> assign_usernames(const std::vector<UsernameCandidate>& candidates,
                                          const std::vector<BoundingBox>& face_boxes);

}  // namespace mosaiclink
