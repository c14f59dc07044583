#include "mosaiclink/manifest.hpp"

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "mosaiclink/errors.hpp"

namespace mosaiclink {

namespace {

using nlohmann::json;

std::string require_string(const json& line_doc, const char* key, std::size_t line) {
    if (!line_doc.contains(key)) {
        throw ManifestError(line, std::string("missing field \"") + key + "\"");
    }
    const json& v = line_doc[key];
    if (!v.is_string() || v.get<std::string>().empty()) {
        throw ManifestError(line, std::string("field \"") + key +
                                      "\" must be a non-empty string");
    }
    return v.get<std::string>();
}

}  // namespace

std::vector<PostRecord> parse_manifest(std::istream& in) {
    std::vector<PostRecord> posts;
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ManifestError(line_no, e.what());
        }
        if (!doc.is_object()) {
            throw ManifestError(line_no, "expected a JSON object");
        }

        PostRecord post;
        post.post_id = require_string(doc, "post_id", line_no);
        const std::string source = require_string(doc, "source", line_no);
        const auto parsed_source = post_source_from_string(source);
        if (!parsed_source) {
            throw ManifestError(line_no, "unknown source \"" + source +
                                             "\" (expected twitter, instagram, or other)");
        }
        post.source = *parsed_source;
        post.image_path = require_string(doc, "image_path", line_no);
        if (doc.contains("tags") && !doc["tags"].is_null()) {
            if (!doc["tags"].is_array()) {
                throw ManifestError(line_no, "field \"tags\" must be an array of strings");
            }
            for (const json& tag : doc["tags"]) {
                if (!tag.is_string()) {
                    throw ManifestError(line_no, "field \"tags\" must hold only strings");
                }
                post.tags.push_back(tag.get<std::string>());
            }
        }

        if (!seen_ids.insert(post.post_id).second) {
            throw DuplicatePostError(line_no, post.post_id);
        }
        posts.push_back(std::move(post));
    }
    return posts;
}

std::vector<PostRecord> ingest_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ManifestError(0, "cannot open manifest: " + path.string());
    }
    return parse_manifest(in);
}

}  // namespace mosaiclink
