#include "mosaiclink/username.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <tuple>

namespace mosaiclink {

std::string fold_case(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::vector<WordToken> filter_tokens(const std::vector<WordToken>& tokens,
                                     const std::set<std::string>& ui_words,
                                     const std::set<std::string>& dictionary) {
    std::vector<WordToken> kept;
    kept.reserve(tokens.size());
    for (const WordToken& t : tokens) {
        const std::string folded = fold_case(t.text);
        if (ui_words.contains(folded) || dictionary.contains(folded)) continue;
        kept.push_back(t);
    }
    return kept;
}

namespace {

std::tuple<double, double, double, double, const std::string&> reading_key(
    const UsernameCandidate& c) {
    return {c.box.y, c.box.x, c.box.w, c.box.h, c.text};
}

UsernameCandidate merge_pair(const UsernameCandidate& a, const UsernameCandidate& b) {
    const bool a_first =
        std::tie(a.box.x, a.box.y, a.text) < std::tie(b.box.x, b.box.y, b.text);
    const UsernameCandidate& left = a_first ? a : b;
    const UsernameCandidate& right = a_first ? b : a;
    UsernameCandidate merged;
    merged.text = left.text + " " + right.text;
    merged.box = box_union(a.box, b.box);
    merged.word_count = a.word_count + b.word_count;
    return merged;
}

}  // namespace

std::vector<UsernameCandidate> merge_word_tokens(const std::vector<WordToken>& tokens,
                                                 double threshold) {
    std::vector<UsernameCandidate> pool;
    pool.reserve(tokens.size());
    for (const WordToken& t : tokens) {
        pool.push_back(UsernameCandidate{t.text, t.box, 1, false});
    }

    bool merged_any = true;
    while (merged_any && pool.size() > 1) {
        merged_any = false;
        std::sort(pool.begin(), pool.end(), [](const UsernameCandidate& a,
                                               const UsernameCandidate& b) {
            return reading_key(a) < reading_key(b);
        });
        std::vector<bool> consumed(pool.size(), false);
        std::vector<UsernameCandidate> next;
        next.reserve(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (consumed[i]) continue;
            const Point anchor = pool[i].box.top_right();
            std::size_t best = pool.size();
            double best_dist = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < pool.size(); ++j) {
                if (j == i || consumed[j]) continue;
                const double d = point_distance(anchor, pool[j].box.top_left());
                const bool closer =
                    d < best_dist ||
                    (d == best_dist && best < pool.size() &&
                     std::tie(pool[j].box.x, pool[j].box.y, pool[j].text) <
                         std::tie(pool[best].box.x, pool[best].box.y, pool[best].text));
                if (closer) {
                    best = j;
                    best_dist = d;
                }
            }
            if (best < pool.size() && best_dist <= threshold) {
                consumed[i] = true;
                consumed[best] = true;
                next.push_back(merge_pair(pool[i], pool[best]));
                merged_any = true;
            }
        }
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (!consumed[i]) next.push_back(std::move(pool[i]));
        }
        pool = std::move(next);
    }

    std::sort(pool.begin(), pool.end(), [](const UsernameCandidate& a,
                                           const UsernameCandidate& b) {
        return reading_key(a) < reading_key(b);
    });
    return pool;
}

NormalizedUsername normalize_username(const std::string& raw,
                                      const std::set<std::string>& generic_names) {
    const std::string folded = fold_case(raw);
    std::string out;
    out.reserve(folded.size());
    bool in_space = true;  // leading whitespace is dropped
    for (const char c : folded) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out.push_back(' ');
        in_space = false;
        out.push_back(c);
    }
    return NormalizedUsername{out, generic_names.contains(out)};
}

std::vector<std::size_t> assign_usernames(const std::vector<UsernameCandidate>& candidates,
                                          const std::vector<BoundingBox>& face_boxes) {
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return reading_key(candidates[a]) < reading_key(candidates[b]);
    });

    std::vector<std::size_t> assignment(candidates.size(), kUnassigned);
    std::vector<bool> claimed(face_boxes.size(), false);
    for (const std::size_t ci : order) {
        const BoundingBox& ubox = candidates[ci].box;
        const Point ucenter = ubox.center();
        std::size_t best = kUnassigned;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t fi = 0; fi < face_boxes.size(); ++fi) {
            if (claimed[fi]) continue;
            const Point fcenter = face_boxes[fi].center();
            if (fcenter.y > ubox.y) continue;  // face must sit above the name
            const double d = point_distance(fcenter, ucenter);
            if (d < best_dist) {
                best = fi;
                best_dist = d;
            }
        }
        if (best != kUnassigned) {
            claimed[best] = true;
            assignment[ci] = best;
        }
    }
    return assignment;
}

}  // namespace mosaiclink
