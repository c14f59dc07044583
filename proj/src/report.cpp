#include "mosaiclink/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "mosaiclink/errors.hpp"

namespace mosaiclink {

namespace {

std::string real4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string quote(const std::string& s) {
    // Report keys are plain identifiers; escape the JSON metacharacters
    // anyway so the emitter is safe for any input.
    std::string out = "\"";
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

// Tiny canonical-JSON writer: fixed two-space indent, insertion order (the
// caller feeds keys lexicographically), "%.4f" for every real.
class Emitter {
public:
    void open_document() {
        out_ = "{";
        depth_ = 1;
        first_in_scope_ = true;
    }

    void open_object(const std::string& key) {
        line(quote(key) + ": {");
        ++depth_;
        first_in_scope_ = true;
    }

    void close_object() {
        --depth_;
        out_ += '\n';
        indent();
        out_ += '}';
        first_in_scope_ = false;  // the next sibling line adds the comma
    }

    template <typename T>
    void field(const std::string& key, const T& value) {
        line(quote(key) + ": " + render(value));
    }

    template <typename V>
    void map_field(const std::string& key, const std::map<std::string, V>& values) {
        if (values.empty()) {
            line(quote(key) + ": {}");
            return;
        }
        open_object(key);
        for (const auto& [k, v] : values) field(k, v);
        close_object();
    }

    std::string finish() {
        out_ += "\n}\n";
        return std::move(out_);
    }

private:
    static std::string render(int v) { return std::to_string(v); }
    static std::string render(double v) { return real4(v); }

    void indent() { out_.append(static_cast<std::size_t>(depth_) * 2, ' '); }

    void line(const std::string& text) {
        if (!first_in_scope_) out_ += ',';
        out_ += '\n';
        indent();
        out_ += text;
        first_in_scope_ = false;
    }

    std::string out_;
    int depth_ = 0;
    bool first_in_scope_ = true;
};

}  // namespace

std::string report_to_json(const StatisticsReport& r) {
    Emitter e;
    e.open_document();
    e.map_field("age_category_shares", r.age_category_shares);
    e.field("age_mean", r.age_mean);
    e.field("age_median", r.age_median);
    e.field("distinct_usernames", r.distinct_usernames);
    e.map_field("gender_counts", r.gender_counts);
    e.open_object("graph");
    e.field("component_count", r.graph.component_count);
    e.field("largest_edges", r.graph.largest_edges);
    e.field("largest_nodes", r.graph.largest_nodes);
    e.field("mean_edges", r.graph.mean_edges);
    e.field("mean_nodes", r.graph.mean_nodes);
    e.close_object();
    e.field("images_ingested", r.images_ingested);
    e.field("images_kept_after_dedup", r.images_kept_after_dedup);
    e.field("mean_participants_per_collage", r.mean_participants_per_collage);
    e.field("multiword_usernames", r.multiword_usernames);
    e.field("repeated_face_identities", r.repeated_face_identities);
    e.field("reused_usernames", r.reused_usernames);
    e.field("total_faces", r.total_faces);
    e.map_field("username_word_count_histogram", r.username_word_count_histogram);
    return e.finish();
}

void emit_report(const StatisticsReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw WriteError("cannot open report for writing: " + path.string());
    }
    out << report_to_json(report);
    out.flush();
    if (!out) {
        throw WriteError("failed writing report: " + path.string());
    }
}

StatisticsReport report_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    StatisticsReport r;
    r.images_ingested = doc.at("images_ingested").get<int>();
    r.images_kept_after_dedup = doc.at("images_kept_after_dedup").get<int>();
    r.mean_participants_per_collage = doc.at("mean_participants_per_collage").get<double>();
    r.total_faces = doc.at("total_faces").get<int>();
    r.age_mean = doc.at("age_mean").get<double>();
    r.age_median = doc.at("age_median").get<double>();
    for (const auto& [k, v] : doc.at("age_category_shares").items()) {
        r.age_category_shares[k] = v.get<double>();
    }
    for (const auto& [k, v] : doc.at("gender_counts").items()) {
        r.gender_counts[k] = v.get<int>();
    }
    for (const auto& [k, v] : doc.at("username_word_count_histogram").items()) {
        r.username_word_count_histogram[k] = v.get<int>();
    }
    r.distinct_usernames = doc.at("distinct_usernames").get<int>();
    r.multiword_usernames = doc.at("multiword_usernames").get<int>();
    r.reused_usernames = doc.at("reused_usernames").get<int>();
    r.repeated_face_identities = doc.at("repeated_face_identities").get<int>();
    const nlohmann::json& g = doc.at("graph");
    r.graph.component_count = g.at("component_count").get<int>();
    r.graph.mean_nodes = g.at("mean_nodes").get<double>();
    r.graph.mean_edges = g.at("mean_edges").get<double>();
    r.graph.largest_nodes = g.at("largest_nodes").get<int>();
    r.graph.largest_edges = g.at("largest_edges").get<int>();
    return r;
}

}  // namespace mosaiclink
