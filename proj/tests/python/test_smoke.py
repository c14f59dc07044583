"""Smoke tests for the Python bindings: a quick pass over every exposed
operation plus one end-to-end pipeline run on the bundled sample corpus."""

import os

import pytest

import mosaiclink

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures", "minizoom")


def test_version_and_constants():
    assert mosaiclink.__version__ == "0.1.0"
    assert mosaiclink.FACE_EMBEDDING_DIM == 128


def test_dhash_constant_grid_is_zero():
    grid = [[128.0] * 9 for _ in range(8)]
    assert mosaiclink.compute_dhash(grid) == 0


def test_dhash_increasing_grid_sets_every_bit():
    grid = [[col * 10.0 for col in range(9)] for _ in range(8)]
    assert mosaiclink.compute_dhash(grid) == 0xFFFFFFFFFFFFFFFF


def test_dhash_rejects_ragged_grids():
    with pytest.raises(ValueError):
        mosaiclink.compute_dhash([[1.0, 2.0], [3.0]])


def test_hamming_distance():
    assert mosaiclink.hamming_distance(0, 0) == 0
    assert mosaiclink.hamming_distance(0, 2**64 - 1) == 64
    assert mosaiclink.hamming_distance(0b1011, 0b0001) == 2


def test_embedding_distances():
    assert mosaiclink.embedding_pair_distance([0, 0], [3, 4]) == pytest.approx(5.0)
    assert mosaiclink.embedding_pair_distance(
        [1, 0], [0, 1], metric="cosine"
    ) == pytest.approx(1.0)
    with pytest.raises(mosaiclink.Error):
        mosaiclink.embedding_pair_distance([1], [1, 2])


def test_bin_age_boundaries():
    assert mosaiclink.bin_age(12) == "child"
    assert mosaiclink.bin_age(17) == "adolescent"
    assert mosaiclink.bin_age(30) == "adult"
    assert mosaiclink.bin_age(65) == "older_adult"


def test_aggregate_age():
    assert mosaiclink.aggregate_age([20, 30]) == pytest.approx(25.0)
    assert mosaiclink.aggregate_age([]) is None


def test_normalize_username():
    assert mosaiclink.normalize_username("  Dana   LEVI ") == ("dana levi", False)
    assert mosaiclink.normalize_username("IPHONE") == ("iphone", True)
    assert mosaiclink.normalize_username("iphone", generic_names=["other"]) == (
        "iphone",
        False,
    )


def test_merge_word_tokens():
    tokens = [
        {"text": "John", "x": 0, "y": 0, "w": 10, "h": 5},
        {"text": "Smith", "x": 13, "y": 0, "w": 12, "h": 5},
        {"text": "Solo", "x": 200, "y": 200, "w": 10, "h": 5},
    ]
    merged = mosaiclink.merge_word_tokens(tokens)
    texts = sorted(c["text"] for c in merged)
    assert texts == ["John Smith", "Solo"]
    joined = next(c for c in merged if c["word_count"] == 2)
    assert joined["x"] == 0 and joined["w"] == 25


def test_link_identities():
    participants = [
        {"participant_id": "m1/f0", "meeting_id": "m1", "username": "dana levi"},
        {"participant_id": "m2/f0", "meeting_id": "m2", "username": "dana levi"},
        {"participant_id": "m3/f0", "meeting_id": "m3"},
    ]
    clusters = mosaiclink.link_identities(participants)
    assert len(clusters) == 2
    assert clusters[0]["members"] == ["m1/f0", "m2/f0"]
    assert clusters[0]["canonical_username"] == "dana levi"
    assert clusters[1]["canonical_username"] is None

    with pytest.raises(mosaiclink.ConfigError):
        mosaiclink.link_identities(participants, use_username=False, use_face=False)


def test_ingest_manifest():
    posts = mosaiclink.ingest_manifest(os.path.join(FIXTURES, "manifest.jsonl"))
    assert len(posts) == 10
    assert posts[0]["post_id"] == "p01"
    assert posts[0]["source"] == "twitter"
    assert posts[0]["tags"] == ["meeting", "team"]


def test_run_pipeline_end_to_end(tmp_path):
    out_dir = tmp_path / "out"
    result = mosaiclink.run_pipeline(
        os.path.join(FIXTURES, "manifest.jsonl"),
        str(out_dir),
        dictionary=os.path.join(FIXTURES, "dictionary.txt"),
    )
    report = result["report"]
    assert report["images_ingested"] == 10
    assert report["images_kept_after_dedup"] == 7
    assert report["total_faces"] == 13
    assert report["distinct_usernames"] == 8
    assert report["graph"]["component_count"] == 5
    assert result["kept"][0] == "p01"
    assert {r["image_id"] for r in result["removed"]} == {"p02", "p03"}
    assert result["filtered_before_dedup"] == ["p04"]
    assert len(result["clusters"]) == 11
    assert any("p09" in w for w in result["warnings"])
    for artifact in ("report.json", "edges.csv", "clusters.json"):
        assert (out_dir / artifact).exists()


def test_run_pipeline_bad_backend(tmp_path):
    with pytest.raises(mosaiclink.ConfigError):
        mosaiclink.run_pipeline(
            os.path.join(FIXTURES, "manifest.jsonl"),
            str(tmp_path / "out"),
            backend="imaginary",
        )


def test_error_hierarchy():
    assert issubclass(mosaiclink.ConfigError, mosaiclink.Error)
