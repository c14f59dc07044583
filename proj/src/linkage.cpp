#include "mosaiclink/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "dsu.hpp"
#include "mosaiclink/dedup.hpp"
#include "mosaiclink/errors.hpp"

namespace mosaiclink {

std::string to_string(Evidence e) {
    return e == Evidence::username ? "username" : "face";
}

std::vector<MatchPair> pairwise_face_matches(const std::vector<Participant>& participants,
                                             double threshold) {
    struct Entry {
        std::size_t index;
        double norm;
    };
    std::vector<Entry> entries;
    entries.reserve(participants.size());
    for (std::size_t i = 0; i < participants.size(); ++i) {
        const auto& emb = participants[i].embedding;
        if (!emb) continue;
        if (emb->size() != kFaceEmbeddingDim) {
            throw DimensionError("face embedding of participant " +
                                 participants[i].participant_id + " has length " +
                                 std::to_string(emb->size()) + ", expected " +
                                 std::to_string(kFaceEmbeddingDim));
        }
        double sq = 0.0;
        for (const double v : *emb) sq += v * v;
        entries.push_back({i, std::sqrt(sq)});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.norm < b.norm;
    });

    std::vector<MatchPair> matches;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            // ||x|-|y|| <= |x-y|: once norms drift apart the pair cannot match.
            if (entries[j].norm - entries[i].norm > threshold) break;
            const Participant& p = participants[entries[i].index];
            const Participant& q = participants[entries[j].index];
            const double d =
                embedding_pair_distance(*p.embedding, *q.embedding, DistanceMetric::euclidean);
            if (d <= threshold) {
                MatchPair m;
                m.evidence = Evidence::face;
                m.distance = d;
                if (p.participant_id < q.participant_id) {
                    m.a = p.participant_id;
                    m.b = q.participant_id;
                } else {
                    m.a = q.participant_id;
                    m.b = p.participant_id;
                }
                matches.push_back(std::move(m));
            }
        }
    }
    std::sort(matches.begin(), matches.end(), [](const MatchPair& x, const MatchPair& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    return matches;
}

std::vector<IdentityCluster> link_identities(const std::vector<Participant>& participants,
                                             double face_threshold, bool use_username,
                                             bool use_face, bool exclude_generic) {
    if (!use_username && !use_face) {
        throw ConfigError("identity linkage needs at least one evidence channel");
    }

    std::unordered_map<std::string, std::size_t> index_of;
    index_of.reserve(participants.size());
    for (std::size_t i = 0; i < participants.size(); ++i) {
        index_of.emplace(participants[i].participant_id, i);
    }

    detail::DisjointSet dsu(participants.size());
    if (use_username) {
        std::map<std::string, std::size_t> first_with;
        for (std::size_t i = 0; i < participants.size(); ++i) {
            const Participant& p = participants[i];
            if (!p.username) continue;
            if (exclude_generic && p.username_generic) continue;
            auto [it, inserted] = first_with.emplace(*p.username, i);
            if (!inserted) dsu.unite(it->second, i);
        }
    }
    if (use_face) {
        for (const MatchPair& m : pairwise_face_matches(participants, face_threshold)) {
            dsu.unite(index_of.at(m.a), index_of.at(m.b));
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < participants.size(); ++i) {
        groups[dsu.find(i)].push_back(i);
    }

    std::vector<IdentityCluster> clusters;
    clusters.reserve(groups.size());
    for (const auto& [root, indices] : groups) {
        IdentityCluster c;
        std::map<std::string, int> username_votes;
        for (const std::size_t i : indices) {
            const Participant& p = participants[i];
            c.members.insert(p.participant_id);
            c.meetings.insert(p.meeting_id);
            if (p.username) ++username_votes[*p.username];
        }
        if (!username_votes.empty()) {
            auto best = username_votes.begin();
            for (auto it = std::next(best); it != username_votes.end(); ++it) {
                if (it->second > best->second) best = it;  // map order breaks ties low
            }
            c.canonical_username = best->first;
        }
        clusters.push_back(std::move(c));
    }

    std::sort(clusters.begin(), clusters.end(),
              [](const IdentityCluster& x, const IdentityCluster& y) {
                  return *x.members.begin() < *y.members.begin();
              });
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "c%04zu", i + 1);
        clusters[i].identity_id = buf;
    }
    return clusters;
}

}  // namespace mosaiclink
