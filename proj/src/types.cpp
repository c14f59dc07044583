#include "mosaiclink/types.hpp"

namespace mosaiclink {

const char* to_string(PostSource s) {
    switch (s) {
        case PostSource::twitter: return "twitter";
        case PostSource::instagram: return "instagram";
        case PostSource::other: return "other";
    }
    return "other";
}

const char* to_string(AgeCategory c) {
    switch (c) {
        case AgeCategory::child: return "child";
        case AgeCategory::adolescent: return "adolescent";
        case AgeCategory::adult: return "adult";
        case AgeCategory::older_adult: return "older_adult";
    }
    return "adult";
}

const char* to_string(Gender g) {
    return g == Gender::male ? "male" : "female";
}

std::optional<PostSource> post_source_from_string(const std::string& s) {
    if (s == "twitter") return PostSource::twitter;
    if (s == "instagram") return PostSource::instagram;
    if (s == "other") return PostSource::other;
    return std::nullopt;
}

std::optional<Gender> gender_from_string(const std::string& s) {
    if (s == "male") return Gender::male;
    if (s == "female") return Gender::female;
    return std::nullopt;
}

}  // namespace mosaiclink
