#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mosaiclink/types.hpp"

namespace mosaiclink {

enum class Evidence { username, face };

std::string to_string(Evidence e);

// One piece of cross-meeting evidence tying two participants together.
struct MatchPair {
    std::string a;  // participant ids; a < b
    std::string b;
    Evidence evidence = Evidence::face;
    std::optional<double> distance;  // present iff evidence == face

    bool operator==(const MatchPair&) const = default;
};

// A set of participants resolved to one person.
struct IdentityCluster {
    std::string identity_id;
    std::set<std::string> members;  // participant ids
    std::optional<std::string> canonical_username;
    std::set<std::string> meetings;

    bool operator==(const IdentityCluster&) const = default;
};

/// All unordered participant pairs whose face embeddings lie within
/// `threshold` euclidean distance, each emitted once with a < b and the
/// result sorted by (a, b). Participants without an embedding are skipped;
/// an embedding of the wrong length raises DimensionError.
///
/// Uses norm-gap pruning: with vectors sorted by norm, a pair whose norms
/// differ by more than the threshold can never match (reverse triangle
/// inequality), so the scan stays near-linear on clustered data while
/// returning exactly the brute-force pair set.
std::vector<MatchPair> pairwise_face_matches(const std::vector<Participant>& participants,
                                             double threshold = 0.3);

/// Groups participants into identity clusters by connected components over
/// the evidence graph: username edges join equal normalized non-generic
/// usernames (generic ones participate too when exclude_generic is false),
/// face edges come from pairwise_face_matches. Every participant lands in
/// exactly one cluster; clusters are ordered by smallest member id and get
/// sequential ids ("c0001", ...). canonical_username is the most frequent
/// member username, ties to the lexicographically smallest.
/// Throws ConfigError when both evidence channels are disabled.
std::vector<IdentityCluster> link_identities(const std::vector<Participant>& participants,
                                             double face_threshold = 0.3,
                                             bool use_username = true,
                                             bool use_face = true,
                                             bool exclude_generic = true);

}  // namespace mosaiclink
