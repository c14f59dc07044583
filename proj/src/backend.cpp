#include "mosaiclink/backend.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mosaiclink/errors.hpp"

namespace mosaiclink {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw BundleParseError(field, what);
}

double require_number(const json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
}

double number_in_unit_range(const json& j, const std::string& field) {
    const double v = require_number(j, field);
    if (v < 0.0 || v > 1.0) fail(field, "must lie in [0, 1]");
    return v;
}

Embedding parse_embedding(const json& j, const std::string& field, bool face) {
    if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of numbers");
    Embedding e;
    e.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        e.push_back(require_number(j[i], field + "[" + std::to_string(i) + "]"));
    }
    if (face && e.size() != kFaceEmbeddingDim) {
        fail(field, "face embeddings must have " + std::to_string(kFaceEmbeddingDim) +
                        " components, got " + std::to_string(e.size()));
    }
    return e;
}

BoundingBox parse_box(const json& j, const std::string& field, int img_w, int img_h) {
    if (!j.is_object()) fail(field, "expected an object with x, y, w, h");
    BoundingBox box;
    for (const char* key : {"x", "y", "w", "h"}) {
        if (!j.contains(key)) fail(field + "." + key, "missing");
    }
    box.x = require_number(j["x"], field + ".x");
    box.y = require_number(j["y"], field + ".y");
    box.w = require_number(j["w"], field + ".w");
    box.h = require_number(j["h"], field + ".h");
    if (!box.valid()) fail(field, "box must have non-negative extent");
    if (img_w > 0 && img_h > 0) {
        if (box.x < 0 || box.y < 0 || box.right() > img_w || box.bottom() > img_h) {
            fail(field, "box exceeds image bounds " + std::to_string(img_w) + "x" +
                            std::to_string(img_h));
        }
    }
    return box;
}

DetectedFace parse_face(const json& j, const std::string& field, Detector detector,
                        int img_w, int img_h) {
    if (!j.is_object()) fail(field, "expected a face object");
    if (!j.contains("box")) fail(field + ".box", "missing");
    DetectedFace face;
    face.detector = detector;
    face.box = parse_box(j["box"], field + ".box", img_w, img_h);
    if (j.contains("embedding") && !j["embedding"].is_null()) {
        face.embedding = parse_embedding(j["embedding"], field + ".embedding", true);
    }
    if (j.contains("age_estimates") && !j["age_estimates"].is_null()) {
        const json& ages = j["age_estimates"];
        if (!ages.is_array()) fail(field + ".age_estimates", "expected an array");
        if (ages.size() > 2) {
            fail(field + ".age_estimates", "at most two age models per detection");
        }
        for (std::size_t i = 0; i < ages.size(); ++i) {
            const std::string age_field =
                field + ".age_estimates[" + std::to_string(i) + "]";
            const double age = require_number(ages[i], age_field);
            if (age < 0.0) fail(age_field, "age must be non-negative");
            face.age_estimates.push_back(age);
        }
    }
    if (j.contains("gender") && !j["gender"].is_null()) {
        if (!j["gender"].is_string()) fail(field + ".gender", "expected a string");
        const auto g = gender_from_string(j["gender"].get<std::string>());
        if (!g) fail(field + ".gender", "must be \"male\" or \"female\"");
        face.gender_estimates.push_back(*g);
    }
    return face;
}

WordToken parse_token(const json& j, const std::string& field, int img_w, int img_h) {
    if (!j.is_object()) fail(field, "expected a token object");
    if (!j.contains("text")) fail(field + ".text", "missing");
    if (!j["text"].is_string()) fail(field + ".text", "expected a string");
    WordToken token;
    token.text = j["text"].get<std::string>();
    if (token.text.empty()) fail(field + ".text", "must be non-empty");
    if (token.text.find_first_of(" \t\r\n") != std::string::npos) {
        fail(field + ".text", "single words carry no interior whitespace");
    }
    if (!j.contains("box")) fail(field + ".box", "missing");
    token.box = parse_box(j["box"], field + ".box", img_w, img_h);
    if (j.contains("confidence") && !j["confidence"].is_null()) {
        token.confidence = number_in_unit_range(j["confidence"], field + ".confidence");
    }
    return token;
}

}  // namespace

DetectionBundle parse_bundle_json(const std::string& text, const std::string& image_id,
                                  int image_width, int image_height) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("(document)", e.what());
    }
    if (!doc.is_object()) fail("(document)", "expected a JSON object");

    if (!doc.contains("schema_version")) fail("schema_version", "missing");
    if (!doc["schema_version"].is_number_integer() ||
        doc["schema_version"].get<int>() != kBundleSchemaVersion) {
        fail("schema_version",
             "this build reads schema version " + std::to_string(kBundleSchemaVersion));
    }

    DetectionBundle bundle;
    bundle.image_id = image_id;
    if (doc.contains("image_id")) {
        if (!doc["image_id"].is_string()) fail("image_id", "expected a string");
        if (doc["image_id"].get<std::string>() != image_id) {
            fail("image_id", "sidecar names image \"" + doc["image_id"].get<std::string>() +
                                 "\" but was loaded for \"" + image_id + "\"");
        }
    }
    if (doc.contains("embedding_model") && !doc["embedding_model"].is_null()) {
        if (!doc["embedding_model"].is_string()) fail("embedding_model", "expected a string");
        bundle.embedding_model = doc["embedding_model"].get<std::string>();
    }
    if (doc.contains("collage_score") && !doc["collage_score"].is_null()) {
        bundle.collage_score = number_in_unit_range(doc["collage_score"], "collage_score");
    }
    if (doc.contains("image_embedding") && !doc["image_embedding"].is_null()) {
        bundle.image_embedding =
            parse_embedding(doc["image_embedding"], "image_embedding", false);
    }
    for (const char* list : {"primary_faces", "secondary_faces"}) {
        if (!doc.contains(list) || doc[list].is_null()) continue;
        if (!doc[list].is_array()) fail(list, "expected an array");
        const Detector detector = std::string_view(list) == "primary_faces"
                                      ? Detector::primary_detector
                                      : Detector::secondary_detector;
        auto& target = detector == Detector::primary_detector ? bundle.primary_faces
                                                              : bundle.secondary_faces;
        for (std::size_t i = 0; i < doc[list].size(); ++i) {
            target.push_back(parse_face(doc[list][i],
                                        std::string(list) + "[" + std::to_string(i) + "]",
                                        detector, image_width, image_height));
        }
    }
    if (doc.contains("word_tokens") && !doc["word_tokens"].is_null()) {
        if (!doc["word_tokens"].is_array()) fail("word_tokens", "expected an array");
        for (std::size_t i = 0; i < doc["word_tokens"].size(); ++i) {
            bundle.word_tokens.push_back(
                parse_token(doc["word_tokens"][i], "word_tokens[" + std::to_string(i) + "]",
                            image_width, image_height));
        }
    }
    return bundle;
}

const BackendDescriptor& FixtureBackend::descriptor() const {
    static const BackendDescriptor desc{
        "fixture",
        {Capability::faces, Capability::embeddings, Capability::age, Capability::gender,
         Capability::words, Capability::collage_score},
    };
    return desc;
}

DetectionBundle FixtureBackend::analyze_collage(const ImageRef& image) const {
    const std::filesystem::path sidecar = image.path.string() + ".bundle.json";
    std::ifstream in(sidecar, std::ios::binary);
    if (!in) {
        // No recorded detections: a valid, empty observation of the image.
        DetectionBundle bundle;
        bundle.image_id = image.image_id;
        return bundle;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_bundle_json(buffer.str(), image.image_id, image.width, image.height);
}

bool classify_collage(const DetectionBundle& bundle, double threshold,
                      std::vector<std::string>* warnings) {
    if (!bundle.collage_score) {
        if (warnings) {
            warnings->push_back("image " + bundle.image_id +
                                ": no collage score; passing classification by default");
        }
        return true;
    }
    return *bundle.collage_score >= threshold;
}

std::unique_ptr<DetectionBackend> make_backend(const std::string& name) {
    if (name == "fixture") return std::make_unique<FixtureBackend>();
    throw ConfigError("unknown backend \"" + name + "\" (available: fixture)");
}

}  // namespace mosaiclink
