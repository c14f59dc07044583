#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mosaiclink/errors.hpp"
#include "mosaiclink/graph.hpp"
#include "mosaiclink/manifest.hpp"
#include "mosaiclink/pipeline.hpp"
#include "mosaiclink/report.hpp"
#include "mosaiclink/wordlists.hpp"

namespace {

using mosaiclink::ConfigError;
using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(std::string("cannot open ") + what + ": " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

mosaiclink::EmbeddingCombine parse_combine(const std::string& value) {
    if (value == "both_required" || value == "both") {
        return mosaiclink::EmbeddingCombine::both_required;
    }
    if (value == "either_suffices" || value == "either") {
        return mosaiclink::EmbeddingCombine::either_suffices;
    }
    throw ConfigError("embedding combine mode must be both_required or either_suffices, got \"" +
                      value + "\"");
}

// Options for `run`, gathered from flags and the optional config file.
struct RunOptions {
    std::string manifest;
    std::string config_file;
    std::string output_dir = "out";
    std::string backend = "fixture";
    double hamming_threshold = 1.2;
    double cosine_threshold = 0.0035;
    double euclidean_threshold = 25.0;
    std::string embedding_combine = "both_required";
    double word_merge_threshold = 10.0;
    double face_link_threshold = 0.3;
    double collage_score_threshold = 0.5;
    std::string stages = "classify,dedup,fusion,username,linkage,graph";
    int jobs = 0;
    std::string ui_words_file;
    std::string dictionary_file;
    std::string generic_names_file;
};

void apply_config_file(RunOptions& opt, const CLI::App& cmd) {
    const std::string text = read_text_file(opt.config_file, "config file");
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + opt.config_file + ": " + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config file " + opt.config_file + ": expected a JSON object");
    }

    // A key applies only when the matching flag was not given — flags win.
    const auto flag_given = [&cmd](const std::string& flag) {
        const CLI::Option* o = cmd.get_option_no_throw(flag);
        return o != nullptr && o->count() > 0;
    };
    const auto load = [&](const char* key, const std::string& flag, auto& into) {
        using T = std::decay_t<decltype(into)>;
        if (!doc.contains(key) || flag_given(flag)) return;
        try {
            into = doc[key].get<T>();
        } catch (const json::exception&) {
            throw ConfigError(std::string("config key \"") + key + "\" has the wrong type");
        }
    };

    load("manifest", "manifest", opt.manifest);
    load("output_dir", "--output-dir", opt.output_dir);
    load("backend", "--backend", opt.backend);
    load("hamming_threshold", "--hamming-threshold", opt.hamming_threshold);
    load("cosine_threshold", "--cosine-threshold", opt.cosine_threshold);
    load("euclidean_threshold", "--euclidean-threshold", opt.euclidean_threshold);
    load("embedding_combine", "--embedding-combine", opt.embedding_combine);
    load("word_merge_threshold", "--word-merge-threshold", opt.word_merge_threshold);
    load("face_link_threshold", "--face-link-threshold", opt.face_link_threshold);
    load("collage_score_threshold", "--collage-score-threshold",
         opt.collage_score_threshold);
    load("stages", "--stages", opt.stages);
    load("jobs", "--jobs", opt.jobs);
    load("ui_words", "--ui-words", opt.ui_words_file);
    load("dictionary", "--dictionary", opt.dictionary_file);
    load("generic_names", "--generic-names", opt.generic_names_file);
}

mosaiclink::PipelineConfig build_pipeline_config(const RunOptions& opt) {
    mosaiclink::PipelineConfig config;
    config.manifest_path = opt.manifest;
    config.output_dir = opt.output_dir;
    config.backend = opt.backend;
    config.dedup.hamming_threshold = opt.hamming_threshold;
    config.dedup.cosine_threshold = opt.cosine_threshold;
    config.dedup.euclidean_threshold = opt.euclidean_threshold;
    config.dedup.embedding_combine = parse_combine(opt.embedding_combine);
    config.word_merge_threshold = opt.word_merge_threshold;
    config.face_link_threshold = opt.face_link_threshold;
    config.collage_score_threshold = opt.collage_score_threshold;
    config.stages = mosaiclink::parse_stage_set(opt.stages);
    config.jobs = opt.jobs;
    if (!opt.ui_words_file.empty()) {
        config.ui_words = mosaiclink::load_word_list(opt.ui_words_file);
    }
    if (!opt.dictionary_file.empty()) {
        config.dictionary = mosaiclink::load_word_list(opt.dictionary_file);
    }
    if (!opt.generic_names_file.empty()) {
        config.generic_names = mosaiclink::load_word_list(opt.generic_names_file);
    }
    return config;
}

int cmd_ingest(const std::string& manifest) {
    const std::vector<mosaiclink::PostRecord> posts =
        mosaiclink::ingest_manifest(manifest);
    std::map<std::string, int> sources;
    for (const mosaiclink::PostRecord& p : posts) ++sources[to_string(p.source)];
    std::cout << json{{"posts", posts.size()}, {"sources", sources}}.dump(2) << "\n";
    return 0;
}

int cmd_run(const RunOptions& opt) {
    const mosaiclink::PipelineConfig config = build_pipeline_config(opt);
    const mosaiclink::PipelineResult result = mosaiclink::run_pipeline(config);

    for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
    for (const mosaiclink::SkippedImage& s : result.skipped) {
        std::cerr << "skipped " << s.image_id << ": " << s.reason << "\n";
    }
    std::cout << "ingested " << result.report.images_ingested << " images ("
              << result.skipped.size() << " skipped)\n"
              << "kept " << result.report.images_kept_after_dedup
              << " after classification and dedup\n"
              << result.report.total_faces << " participants, "
              << result.clusters.size() << " identities, "
              << result.report.graph.component_count << " graph components\n"
              << "report: " << (config.output_dir / "report.json").string() << "\n";
    return 0;
}

int cmd_report(const std::string& path) {
    const mosaiclink::StatisticsReport r =
        mosaiclink::report_from_json(read_text_file(path, "report"));
    const auto real4 = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.4f", v);
        return std::string(buf);
    };
    std::cout << "images ingested:           " << r.images_ingested << "\n"
              << "kept after dedup:          " << r.images_kept_after_dedup << "\n"
              << "total faces:               " << r.total_faces << "\n"
              << "mean participants/collage: " << real4(r.mean_participants_per_collage)
              << "\n"
              << "age mean / median:         " << real4(r.age_mean) << " / "
              << real4(r.age_median) << "\n";
    std::cout << "age category shares:      ";
    for (const auto& [category, share] : r.age_category_shares) {
        std::cout << " " << category << " " << real4(share);
    }
    std::cout << "\ngender counts:            ";
    if (r.gender_counts.empty()) std::cout << " (none)";
    for (const auto& [gender, count] : r.gender_counts) {
        std::cout << " " << gender << " " << count;
    }
    std::cout << "\nusernames:                 " << r.distinct_usernames << " distinct, "
              << r.multiword_usernames << " multi-word, " << r.reused_usernames
              << " reused across meetings\n";
    std::cout << "word-count histogram:     ";
    if (r.username_word_count_histogram.empty()) std::cout << " (none)";
    for (const auto& [words, count] : r.username_word_count_histogram) {
        std::cout << " " << words << ":" << count;
    }
    std::cout << "\nrepeated face identities:  " << r.repeated_face_identities << "\n"
              << "graph:                     " << r.graph.component_count
              << " components, largest " << r.graph.largest_nodes << " nodes / "
              << r.graph.largest_edges << " edges, mean " << real4(r.graph.mean_nodes)
              << " nodes / " << real4(r.graph.mean_edges) << " edges\n";
    return 0;
}

int cmd_graph_export(const std::string& clusters_path, const std::string& output_path) {
    json doc;
    try {
        doc = json::parse(read_text_file(clusters_path, "clusters file"));
    } catch (const json::parse_error& e) {
        throw ConfigError("clusters file " + clusters_path + ": " + e.what());
    }
    if (!doc.is_array()) {
        throw ConfigError("clusters file " + clusters_path + ": expected a JSON array");
    }
    std::map<std::string, std::set<std::string>> meetings;
    for (const json& cluster : doc) {
        if (!cluster.is_object() || !cluster.contains("identity_id") ||
            !cluster.contains("meetings")) {
            throw ConfigError("clusters file " + clusters_path +
                              ": every entry needs identity_id and meetings");
        }
        const std::string id = cluster["identity_id"].get<std::string>();
        for (const json& m : cluster["meetings"]) {
            meetings[m.get<std::string>()].insert(id);
        }
    }
    const mosaiclink::SocialGraphData graph = mosaiclink::build_social_graph(meetings);
    mosaiclink::export_edge_list(graph, output_path);
    std::cout << "wrote " << graph.edges.size() << " edges over " << graph.nodes.size()
              << " identities to " << output_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Video-conference collage analysis pipeline"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "mosaiclink 0.1.0");

    std::string ingest_manifest_path;
    CLI::App* ingest = app.add_subcommand("ingest", "Validate a post manifest");
    ingest->add_option("manifest", ingest_manifest_path, "JSONL post manifest")
        ->required();

    RunOptions opt;
    CLI::App* run = app.add_subcommand("run", "Run the full analysis pipeline");
    run->add_option("manifest", opt.manifest, "JSONL post manifest");
    run->add_option("--config", opt.config_file,
                    "JSON config file (same keys as flags; flags win)");
    run->add_option("-o,--output-dir", opt.output_dir, "Artifact directory")
        ->capture_default_str();
    run->add_option("--backend", opt.backend, "Detection backend name")
        ->capture_default_str();
    run->add_option("--hamming-threshold", opt.hamming_threshold,
                    "Max dhash Hamming distance treated as a duplicate")
        ->capture_default_str();
    run->add_option("--cosine-threshold", opt.cosine_threshold,
                    "Max cosine distance between image embeddings")
        ->capture_default_str();
    run->add_option("--euclidean-threshold", opt.euclidean_threshold,
                    "Max euclidean distance between image embeddings")
        ->capture_default_str();
    run->add_option("--embedding-combine", opt.embedding_combine,
                    "both_required or either_suffices")
        ->capture_default_str();
    run->add_option("--word-merge-threshold", opt.word_merge_threshold,
                    "Max pixel gap when joining words into usernames")
        ->capture_default_str();
    run->add_option("--face-link-threshold", opt.face_link_threshold,
                    "Max face-embedding distance for identity links")
        ->capture_default_str();
    run->add_option("--collage-score-threshold", opt.collage_score_threshold,
                    "Min classifier score for an image to count as a collage")
        ->capture_default_str();
    run->add_option("--stages", opt.stages, "Comma-separated stage subset")
        ->capture_default_str();
    run->add_option("-j,--jobs", opt.jobs, "Worker threads (0 = hardware)")
        ->capture_default_str();
    run->add_option("--ui-words", opt.ui_words_file,
                    "Word list replacing the built-in interface words");
    run->add_option("--dictionary", opt.dictionary_file,
                    "Dictionary word list filtered from tokens");
    run->add_option("--generic-names", opt.generic_names_file,
                    "Name list replacing the built-in generic usernames");

    std::string report_path;
    CLI::App* report = app.add_subcommand("report", "Print a report.json summary");
    report->add_option("report", report_path, "Path to report.json")->required();

    std::string clusters_path;
    std::string edges_path;
    CLI::App* graph_export =
        app.add_subcommand("graph-export", "Rebuild the co-participation edge list");
    graph_export->add_option("--clusters", clusters_path, "clusters.json from a run")
        ->required();
    graph_export->add_option("--output", edges_path, "Destination CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*ingest) return cmd_ingest(ingest_manifest_path);
        if (*run) {
            if (!opt.config_file.empty()) apply_config_file(opt, *run);
            if (opt.manifest.empty()) {
                throw ConfigError("no manifest given (positional argument or config key)");
            }
            return cmd_run(opt);
        }
        if (*report) return cmd_report(report_path);
        if (*graph_export) return cmd_graph_export(clusters_path, edges_path);
    } catch (const mosaiclink::ManifestError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const mosaiclink::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
