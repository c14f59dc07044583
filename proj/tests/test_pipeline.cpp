#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "helpers.hpp"
#include "mosaiclink/errors.hpp"
#include "mosaiclink/pipeline.hpp"
#include "mosaiclink/report.hpp"
#include "mosaiclink/username.hpp"
#include "mosaiclink/wordlists.hpp"

using mosaiclink::PipelineConfig;
using mosaiclink::PipelineResult;

namespace {

std::filesystem::path fixture_manifest() {
  return testutil::fixture_root() / "minizoom" / "manifest.jsonl";
}

PipelineConfig fixture_config(const std::filesystem::path& out_dir) {
  PipelineConfig config;
  config.manifest_path = fixture_manifest();
  config.output_dir = out_dir;
  config.dictionary = mosaiclink::load_word_list(
      testutil::fixture_root() / "minizoom" / "dictionary.txt");
  return config;
}

const mosaiclink::IdentityCluster* cluster_by_id(
    const PipelineResult& result, const std::string& id) {
  for (const auto& c : result.clusters) {
    if (c.identity_id == id) return &c;
  }
  return nullptr;
}

// Writes a 9x8 PGM whose dhash is all-ones (ascending columns) or all-zeros
// (constant), so the two never collide.
void write_tiny_image(const std::filesystem::path& path, bool ascending) {
  mosaiclink::GrayImage img = testutil::make_gray(9, 8, std::vector<double>(72, 64.0));
  if (ascending) {
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 9; ++c) img.at(r, c) = c * 20.0;
  }
  testutil::write_file(path, testutil::to_pgm(img));
}

std::string face_sidecar(const std::string& image_id, const std::string& model,
                         double first_component) {
  nlohmann::json face_embedding = nlohmann::json::array();
  face_embedding.push_back(first_component);
  for (int i = 1; i < 128; ++i) face_embedding.push_back(0.0);
  nlohmann::json doc = {
      {"schema_version", 1},
      {"image_id", image_id},
      {"collage_score", 0.9},
      {"embedding_model", model},
      {"primary_faces",
       {{{"box", {{"x", 0}, {"y", 0}, {"w", 4}, {"h", 4}}},
         {"embedding", face_embedding}}}}};
  return doc.dump(2);
}

}  // namespace

TEST_CASE("full fixture run produces the hand-derived statistics") {
  testutil::ScratchDir out;
  PipelineResult result = mosaiclink::run_pipeline(fixture_config(out.path()));

  const auto& r = result.report;
  CHECK(r.images_ingested == 10);
  CHECK(r.images_kept_after_dedup == 7);
  CHECK(r.total_faces == 13);
  CHECK(r.mean_participants_per_collage == doctest::Approx(13.0 / 7.0));
  CHECK(r.age_mean == doctest::Approx(34.625));
  CHECK(r.age_median == doctest::Approx(31.75));
  CHECK(r.age_category_shares.at("child") == doctest::Approx(1 / 6.0));
  CHECK(r.age_category_shares.at("adolescent") == doctest::Approx(1 / 6.0));
  CHECK(r.age_category_shares.at("adult") == doctest::Approx(0.5));
  CHECK(r.age_category_shares.at("older_adult") == doctest::Approx(1 / 6.0));
  CHECK(r.gender_counts.at("female") == 6);
  CHECK(r.gender_counts.at("male") == 5);
  CHECK(r.distinct_usernames == 8);
  CHECK(r.multiword_usernames == 6);
  CHECK(r.reused_usernames == 1);
  CHECK(r.repeated_face_identities == 1);
  CHECK(r.username_word_count_histogram.at("1") == 2);
  CHECK(r.username_word_count_histogram.at("2") == 6);
  CHECK(r.graph.component_count == 5);
  CHECK(r.graph.largest_nodes == 5);
  CHECK(r.graph.largest_edges == 5);
  CHECK(r.graph.mean_nodes == doctest::Approx(2.2));
  CHECK(r.graph.mean_edges == doctest::Approx(1.4));

  // Classifier and dedup decisions.
  CHECK(result.filtered_before_dedup == std::vector<std::string>{"p04"});
  CHECK(result.dedup.kept ==
        std::vector<std::string>{"p01", "p05", "p06", "p07", "p08", "p09",
                                 "p10"});
  REQUIRE(result.dedup.removed.size() == 2);
  CHECK(result.dedup.removed[0].image_id == "p02");
  CHECK(result.dedup.removed[0].kept_id == "p01");
  CHECK(result.dedup.removed[0].reason == mosaiclink::DedupReason::hash);
  CHECK(result.dedup.removed[1].image_id == "p03");
  CHECK(result.dedup.removed[1].reason == mosaiclink::DedupReason::embedding);

  // Identity clusters.
  REQUIRE(result.clusters.size() == 11);
  const auto* c1 = cluster_by_id(result, "c0001");
  REQUIRE(c1 != nullptr);
  CHECK(c1->members == std::set<std::string>{"p01/f0", "p05/f0"});
  CHECK(c1->canonical_username == "alice cohen");
  CHECK(c1->meetings == std::set<std::string>{"p01", "p05"});
  const auto* c4 = cluster_by_id(result, "c0004");
  REQUIRE(c4 != nullptr);
  CHECK(c4->members == std::set<std::string>{"p05/f1", "p06/f0"});
  CHECK(c4->canonical_username == "dana levi");
  const auto* c9 = cluster_by_id(result, "c0009");
  REQUIRE(c9 != nullptr);
  CHECK_FALSE(c9->canonical_username.has_value());

  // The image without a collage score passes with a warning.
  REQUIRE(result.warnings.size() == 1);
  CHECK(result.warnings[0].find("p09") != std::string::npos);
  CHECK(result.skipped.empty());

  // Every artifact landed in the output directory.
  for (const char* name :
       {"dedup.json", "participants.json", "usernames.json", "clusters.json",
        "edges.csv", "report.json", "skipped.json"}) {
    CHECK(std::filesystem::exists(out.file(name)));
  }

  // The social graph export is byte-exact.
  CHECK(testutil::read_file(out.file("edges.csv")) ==
        "source,target,weight\n"
        "c0001,c0002,1\n"
        "c0001,c0003,1\n"
        "c0001,c0004,1\n"
        "c0002,c0003,1\n"
        "c0004,c0005,1\n"
        "c0006,c0007,1\n"
        "c0010,c0011,1\n");

  // The emitted report parses back to the in-memory struct.
  auto parsed = mosaiclink::report_from_json(
      testutil::read_file(out.file("report.json")));
  CHECK(parsed.images_ingested == r.images_ingested);
  CHECK(parsed.total_faces == r.total_faces);
  CHECK(parsed.graph == r.graph);

  // Aggregate consistency: mean participants times kept images gives the
  // face count.
  CHECK(r.mean_participants_per_collage * r.images_kept_after_dedup ==
        doctest::Approx(r.total_faces));
}

TEST_CASE("repeat runs and different worker counts are byte-identical") {
  testutil::ScratchDir out1, out2, out3;
  auto c1 = fixture_config(out1.path());
  c1.jobs = 1;
  auto c2 = fixture_config(out2.path());
  c2.jobs = 4;
  auto c3 = fixture_config(out3.path());

  mosaiclink::run_pipeline(c1);
  mosaiclink::run_pipeline(c2);
  mosaiclink::run_pipeline(c3);

  auto report1 = testutil::read_file(out1.file("report.json"));
  CHECK(report1 == testutil::read_file(out2.file("report.json")));
  CHECK(report1 == testutil::read_file(out3.file("report.json")));
  auto edges1 = testutil::read_file(out1.file("edges.csv"));
  CHECK(edges1 == testutil::read_file(out2.file("edges.csv")));
  CHECK(edges1 == testutil::read_file(out3.file("edges.csv")));
  CHECK(testutil::read_file(out1.file("clusters.json")) ==
        testutil::read_file(out2.file("clusters.json")));
}

TEST_CASE("an empty manifest runs to completion with empty outputs") {
  testutil::ScratchDir dir;
  auto manifest = dir.file("empty.jsonl");
  testutil::write_file(manifest, "");
  PipelineConfig config;
  config.manifest_path = manifest;
  config.output_dir = dir.file("out");
  PipelineResult result = mosaiclink::run_pipeline(config);
  CHECK(result.report.images_ingested == 0);
  CHECK(result.report.images_kept_after_dedup == 0);
  CHECK(result.report.total_faces == 0);
  CHECK(result.report.mean_participants_per_collage == 0.0);
  CHECK(result.report.graph.component_count == 0);
  CHECK(result.participants.empty());
  CHECK(result.clusters.empty());
  CHECK(std::filesystem::exists(dir.file("out") / "report.json"));
  CHECK(testutil::read_file(dir.file("out") / "edges.csv") ==
        "source,target,weight\n");
}

TEST_CASE("unreadable images are skipped, not fatal") {
  testutil::ScratchDir dir;
  write_tiny_image(dir.file("good.pgm"), true);
  testutil::write_file(dir.file("broken.pgm"), "not an image");
  testutil::write_file(
      dir.file("manifest.jsonl"),
      R"({"post_id": "good", "source": "other", "image_path": "good.pgm"}
{"post_id": "broken", "source": "other", "image_path": "broken.pgm"}
)");
  PipelineConfig config;
  config.manifest_path = dir.file("manifest.jsonl");
  config.output_dir = dir.file("out");
  PipelineResult result = mosaiclink::run_pipeline(config);
  CHECK(result.report.images_ingested == 1);
  REQUIRE(result.skipped.size() == 1);
  CHECK(result.skipped[0].image_id == "broken");
  CHECK(!result.skipped[0].reason.empty());

  // skipped.json records the same information.
  auto doc = nlohmann::json::parse(
      testutil::read_file(dir.file("out") / "skipped.json"));
  REQUIRE(doc.at("skipped").size() == 1);
  CHECK(doc.at("skipped")[0].at("image_id") == "broken");
}

TEST_CASE("a malformed sidecar skips only its image") {
  testutil::ScratchDir dir;
  write_tiny_image(dir.file("ok.pgm"), true);
  write_tiny_image(dir.file("bad.pgm"), false);
  testutil::write_file(dir.file("bad.pgm.bundle.json"), "{broken");
  testutil::write_file(
      dir.file("manifest.jsonl"),
      R"({"post_id": "ok", "source": "other", "image_path": "ok.pgm"}
{"post_id": "bad", "source": "other", "image_path": "bad.pgm"}
)");
  PipelineConfig config;
  config.manifest_path = dir.file("manifest.jsonl");
  config.output_dir = dir.file("out");
  PipelineResult result = mosaiclink::run_pipeline(config);
  CHECK(result.report.images_ingested == 1);
  REQUIRE(result.skipped.size() == 1);
  CHECK(result.skipped[0].image_id == "bad");
}

TEST_CASE("disabling the classifier admits low-scoring images") {
  testutil::ScratchDir out;
  auto config = fixture_config(out.path());
  config.stages.classify = false;
  PipelineResult result = mosaiclink::run_pipeline(config);
  CHECK(result.filtered_before_dedup.empty());
  // p04 (score 0.2) survives to dedup and is distinct, so kept grows by one.
  CHECK(result.report.images_kept_after_dedup == 8);
  CHECK(std::find(result.dedup.kept.begin(), result.dedup.kept.end(), "p04") !=
        result.dedup.kept.end());
}

TEST_CASE("disabling dedup never decreases the kept count") {
  testutil::ScratchDir out;
  auto config = fixture_config(out.path());
  config.stages.dedup = false;
  PipelineResult result = mosaiclink::run_pipeline(config);
  CHECK(result.dedup.removed.empty());
  CHECK(result.report.images_kept_after_dedup == 9);  // 10 minus p04
  CHECK(result.report.images_kept_after_dedup >= 7);
  // The duplicates carry no faces, so downstream statistics are unchanged.
  CHECK(result.report.total_faces == 13);
}

TEST_CASE("disabling fusion empties everything downstream") {
  testutil::ScratchDir out;
  auto config = fixture_config(out.path());
  config.stages.fusion = false;
  PipelineResult result = mosaiclink::run_pipeline(config);
  CHECK(result.participants.empty());
  CHECK(result.report.total_faces == 0);
  CHECK(result.clusters.empty());
  CHECK(result.report.graph.component_count == 0);
}

TEST_CASE("disabling linkage keeps participants but no clusters") {
  testutil::ScratchDir out;
  auto config = fixture_config(out.path());
  config.stages.linkage = false;
  PipelineResult result = mosaiclink::run_pipeline(config);
  CHECK(result.report.total_faces == 13);
  CHECK(result.clusters.empty());
  CHECK(result.report.repeated_face_identities == 0);
  CHECK(result.social_graph.nodes.empty());
}

TEST_CASE("stage lists parse by name") {
  auto stages = mosaiclink::parse_stage_set("classify,dedup,fusion");
  CHECK(stages.classify);
  CHECK(stages.dedup);
  CHECK(stages.fusion);
  CHECK_FALSE(stages.username);
  CHECK_FALSE(stages.linkage);
  CHECK_FALSE(stages.graph);
  CHECK_THROWS_AS(mosaiclink::parse_stage_set("classify,warp"),
                  mosaiclink::ConfigError);
}

TEST_CASE("face embeddings from different models abort the run") {
  testutil::ScratchDir dir;
  write_tiny_image(dir.file("a.pgm"), true);
  write_tiny_image(dir.file("b.pgm"), false);
  testutil::write_file(dir.file("a.pgm.bundle.json"),
                       face_sidecar("a", "model-a", 1.0));
  testutil::write_file(dir.file("b.pgm.bundle.json"),
                       face_sidecar("b", "model-b", 2.0));
  testutil::write_file(
      dir.file("manifest.jsonl"),
      R"({"post_id": "a", "source": "other", "image_path": "a.pgm"}
{"post_id": "b", "source": "other", "image_path": "b.pgm"}
)");
  PipelineConfig config;
  config.manifest_path = dir.file("manifest.jsonl");
  config.output_dir = dir.file("out");
  CHECK_THROWS_AS(mosaiclink::run_pipeline(config), mosaiclink::Error);

  // With a single model the same corpus runs fine.
  testutil::write_file(dir.file("b.pgm.bundle.json"),
                       face_sidecar("b", "model-a", 2.0));
  PipelineConfig config2;
  config2.manifest_path = dir.file("manifest.jsonl");
  config2.output_dir = dir.file("out2");
  PipelineResult result = mosaiclink::run_pipeline(config2);
  CHECK(result.report.total_faces == 2);
}

TEST_CASE("configuration rejects negative thresholds and job counts") {
  PipelineConfig config;
  config.manifest_path = "unused.jsonl";
  config.dedup.hamming_threshold = -1.0;
  CHECK_THROWS_AS(config.validate(), mosaiclink::ConfigError);

  PipelineConfig config2;
  config2.manifest_path = "unused.jsonl";
  config2.jobs = -2;
  CHECK_THROWS_AS(config2.validate(), mosaiclink::ConfigError);

  PipelineConfig ok;
  ok.manifest_path = "unused.jsonl";
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("unknown backend names fail before any work happens") {
  testutil::ScratchDir dir;
  testutil::write_file(dir.file("m.jsonl"), "");
  PipelineConfig config;
  config.manifest_path = dir.file("m.jsonl");
  config.output_dir = dir.file("out");
  config.backend = "imaginary";
  CHECK_THROWS_AS(mosaiclink::run_pipeline(config), mosaiclink::ConfigError);
}

TEST_CASE("usernames artifact keeps collage-level reconstructions") {
  testutil::ScratchDir out;
  PipelineResult result = mosaiclink::run_pipeline(fixture_config(out.path()));
  // p10's "Zoe" sits above both faces, so it stays unassigned.
  bool found_unassigned = false;
  for (const auto& u : result.usernames) {
    if (u.image_id == "p10" && u.text == "zoe") {
      CHECK(u.participant_id.empty());
      found_unassigned = true;
    }
  }
  CHECK(found_unassigned);
  // Every assigned participant id actually exists.
  std::set<std::string> participant_ids;
  for (const auto& p : result.participants) {
    participant_ids.insert(p.participant_id);
  }
  for (const auto& u : result.usernames) {
    if (!u.participant_id.empty()) {
      CHECK(participant_ids.count(u.participant_id) == 1);
    }
  }
}
