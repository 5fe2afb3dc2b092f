import json

import numpy as np
import pytest

from knotgraph.dataset import (
    DatasetError,
    PipelineConfig,
    SplitSpec,
    augment,
    build_sample,
    ingest_csv,
    run_pipeline,
    split,
    uniform_c_sampler,
)
from knotgraph.diagram import parse_pd
from knotgraph.invariants import goeritz_determinant

BASE_MAPPING = {
    "name": "name",
    "pd": "pd_notation",
    "crossing_number": "crossing_number",
    "feature.alternating": "alternating",
    "feature.crossing_number": "crossing_number",
    "feature.determinant": "determinant",
    "target.determinant": "determinant",
}

CONFIG_TEXT = """\
name=name
pd=pd_notation
crossing_number=crossing_number
feature.alternating=alternating
feature.crossing_number=crossing_number
feature.determinant=determinant
target.determinant=determinant
versions=2
c_min=8
c_max=16
target=determinant
"""


def _write_csv(path, rows):
    header = "name,pd_notation,crossing_number,alternating,determinant\n"
    path.write_text(header + "\n".join(rows) + ("\n" if rows else ""))
    return str(path)


class TestIngest:
    def test_fixture_loads(self, fixture_csv_path):
        records, report = ingest_csv(fixture_csv_path, BASE_MAPPING)
        assert report.kept == report.total_rows == len(records)
        trefoil = next(r for r in records if r.name == "rk3_3_1")
        assert trefoil.target("determinant") == 3.0
        assert trefoil.crossing_number == 3
        # feature order: alternating first, determinant in slot 8
        assert trefoil.features[0] == 1.0
        assert trefoil.features[7] == 3.0

    def test_bad_pd_skipped_and_reported(self, tmp_path):
        path = _write_csv(
            tmp_path / "rows.csv",
            [
                'good,"X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)",3,Y,3',
                "bad,nonsense,3,Y,3",
            ],
        )
        records, report = ingest_csv(path, BASE_MAPPING)
        assert [r.name for r in records] == ["good"]
        assert len(report.skipped) == 1 and report.skipped[0][0] == 3

    def test_missing_mapped_column_is_hard_error(self, tmp_path):
        path = tmp_path / "rows.csv"
        path.write_text("name,pd_notation,crossing_number,alternating\nx,y,3,Y\n")
        with pytest.raises(DatasetError, match="determinant"):
            ingest_csv(path, BASE_MAPPING)

    def test_zero_valid_rows(self, tmp_path):
        path = _write_csv(tmp_path / "rows.csv", ["bad,nonsense,3,Y,3"])
        with pytest.raises(DatasetError, match="no valid rows"):
            ingest_csv(path, BASE_MAPPING)

    def test_knotinfo_style_brackets_accepted(self, tmp_path):
        path = _write_csv(
            tmp_path / "rows.csv",
            ['tre,"PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]",3,Y,3'],
        )
        records, _ = ingest_csv(path, BASE_MAPPING)
        assert parse_pd(records[0].pd).n == 3

    def test_missing_target_excludes_from_task_only(self, tmp_path):
        path = _write_csv(
            tmp_path / "rows.csv",
            ['tre,"X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)",3,Y,'],
        )
        records, _ = ingest_csv(path, BASE_MAPPING)
        assert records[0].target("determinant") is None


class TestAugment:
    def _record(self, fixture_csv_path, name="rk4_5_2"):
        records, _ = ingest_csv(fixture_csv_path, BASE_MAPPING)
        return next(r for r in records if r.name == name)

    def test_counts_and_provenance(self, fixture_csv_path):
        record = self._record(fixture_csv_path)
        out = augment(record, versions=3, c_sampler=uniform_c_sampler(5, 10), seed=7)
        assert len(out) == 4  # original + versions
        assert out[0][1]["name"].endswith("#base")
        assert {p["base"] for _, p in out} == {record.name}

    def test_deterministic(self, fixture_csv_path):
        record = self._record(fixture_csv_path)
        sampler = uniform_c_sampler(5, 10)
        a = augment(record, versions=3, c_sampler=sampler, seed=11)
        b = augment(record, versions=3, c_sampler=sampler, seed=11)
        assert [(d.crossings, p) for d, p in a] == [(d.crossings, p) for d, p in b]

    def test_determinant_shared_by_all_versions(self, fixture_csv_path):
        record = self._record(fixture_csv_path, name="rk5_7_2")
        for diagram, _ in augment(record, versions=4, c_sampler=uniform_c_sampler(6, 14), seed=3):
            assert goeritz_determinant(diagram) == 7

    def test_min_crossings_escalates(self, fixture_csv_path):
        record = self._record(fixture_csv_path)
        out = augment(
            record, versions=1, c_sampler=uniform_c_sampler(5, 10), seed=1,
            include_original=False, min_crossings=30,
        )
        assert all(d.n >= 30 for d, _ in out)


class TestSplit:
    def _records(self, fixture_csv_path):
        records, _ = ingest_csv(fixture_csv_path, BASE_MAPPING)
        return records

    def test_holdout_sizes_and_stability(self, fixture_csv_path):
        records = self._records(fixture_csv_path)[:10]
        spec = SplitSpec(mode="RANDOM_HOLDOUT", seed=5)
        train, test = split(records, spec)
        assert len(train) == 8 and len(test) == 2
        assert (train, test) == split(records, spec)

    def test_by_crossings_no_twelve_in_train(self, fixture_csv_path):
        records = self._records(fixture_csv_path)
        train, test = split(records, SplitSpec(mode="BY_SOLVED_CROSSINGS"))
        assert all(records[i].crossing_number <= 11 for i in train)
        assert all(records[i].crossing_number == 12 for i in test)

    def test_disjoint_and_exhaustive(self, fixture_csv_path):
        records = self._records(fixture_csv_path)[:25]
        train, test = split(records, SplitSpec(mode="RANDOM_HOLDOUT", seed=1))
        assert set(train) | set(test) == set(range(25))
        assert not set(train) & set(test)

    def test_large_mode_all_train(self, fixture_csv_path):
        records = self._records(fixture_csv_path)[:5]
        train, test = split(records, SplitSpec(mode="LARGE_KNOTS"))
        assert train == list(range(5)) and test == []


class TestPipeline:
    def test_sample_schema(self, fixture_csv_path):
        records, _ = ingest_csv(fixture_csv_path, BASE_MAPPING)
        record = records[0]
        diagram = parse_pd(record.pd)
        sample = build_sample(diagram, record, {"name": "x", "base": record.name, "seed": 1},
                              "determinant")
        assert list(sample) == [
            "name", "base", "seed", "crossings", "num_nodes", "edges",
            "edge_attr", "node_attr", "features", "target", "target_name",
        ]
        assert len(sample["edges"]) == 2 * (2 * diagram.n)
        assert len(sample["edge_attr"]) == len(sample["edges"])
        # every directed arc has its reverse adjacent to it
        for k in range(0, len(sample["edges"]), 2):
            u, v = sample["edges"][k]
            assert sample["edges"][k + 1] == [v, u]
        assert all(idx < sample["num_nodes"] for arc in sample["edges"] for idx in arc)
        assert len(sample["features"]) == 10

    def test_byte_identical_reruns(self, tmp_path, fixture_csv_path):
        config = PipelineConfig.from_kv(CONFIG_TEXT)
        spec = SplitSpec(mode="RANDOM_HOLDOUT", seed=9)
        small_csv = tmp_path / "small.csv"
        small_csv.write_text("\n".join(open(fixture_csv_path).read().splitlines()[:13]) + "\n")
        out_a, out_b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run_pipeline(small_csv, config, out_a, spec, seed=9)
        run_pipeline(small_csv, config, out_b, spec, seed=9)
        assert out_a.read_bytes() == out_b.read_bytes()
        manifest_a = out_a.with_suffix(".jsonl.manifest.json").read_bytes()
        manifest_b = out_b.with_suffix(".jsonl.manifest.json").read_bytes()
        assert manifest_a == manifest_b

    def test_manifest_contents(self, tmp_path, fixture_csv_path):
        config = PipelineConfig.from_kv(CONFIG_TEXT)
        small_csv = tmp_path / "small.csv"
        small_csv.write_text("\n".join(open(fixture_csv_path).read().splitlines()[:9]) + "\n")
        manifest = run_pipeline(small_csv, config, tmp_path / "out.jsonl",
                                SplitSpec(mode="RANDOM_HOLDOUT", seed=2), seed=2)
        assert manifest["count"] == 8 * 3
        assert manifest["config_hash"] == config.config_hash()
        assert set(manifest["splits"]) == {"mode", "train", "test"}
        assert not set(manifest["splits"]["train"]) & set(manifest["splits"]["test"])
        std = manifest["feature_standardization"]
        assert len(std["mean"]) == 10 and len(std["std"]) == 10

    def test_train_features_standardized(self, tmp_path, fixture_csv_path):
        config = PipelineConfig.from_kv(CONFIG_TEXT)
        small_csv = tmp_path / "small.csv"
        small_csv.write_text("\n".join(open(fixture_csv_path).read().splitlines()[:13]) + "\n")
        out = tmp_path / "out.jsonl"
        manifest = run_pipeline(small_csv, config, out,
                                SplitSpec(mode="RANDOM_HOLDOUT", seed=4), seed=4)
        train_names = set(manifest["splits"]["train"])
        rows = [json.loads(line) for line in out.read_text().splitlines()]
        train_feats = np.array([r["features"] for r in rows if r["base"] in train_names])
        assert np.allclose(train_feats.mean(axis=0), 0.0, atol=1e-9)
        live = train_feats.std(axis=0) > 1e-9
        assert np.allclose(train_feats.std(axis=0)[live], 1.0, atol=1e-9)

    def test_target_constant_per_base(self, tmp_path, fixture_csv_path):
        config = PipelineConfig.from_kv(CONFIG_TEXT)
        small_csv = tmp_path / "small.csv"
        small_csv.write_text("\n".join(open(fixture_csv_path).read().splitlines()[:7]) + "\n")
        out = tmp_path / "out.jsonl"
        run_pipeline(small_csv, config, out, SplitSpec(mode="RANDOM_HOLDOUT", seed=1), seed=1)
        rows = [json.loads(line) for line in out.read_text().splitlines()]
        by_base = {}
        for r in rows:
            by_base.setdefault(r["base"], set()).add(r["target"])
        assert all(len(values) == 1 for values in by_base.values())


class TestConfig:
    def test_kv_parsing(self):
        cfg = PipelineConfig.from_kv(CONFIG_TEXT)
        assert cfg.versions == 2 and (cfg.c_min, cfg.c_max) == (8, 16)
        assert cfg.target == "determinant"

    def test_requires_core_mapping(self):
        with pytest.raises(DatasetError, match="must map"):
            PipelineConfig.from_kv("pd=pd_notation\ncrossing_number=n\n")

    def test_rejects_unknown_target(self):
        with pytest.raises(DatasetError, match="unknown target"):
            PipelineConfig.from_kv(CONFIG_TEXT + "target=writhe\n")

    def test_hash_tracks_text(self):
        a = PipelineConfig.from_kv(CONFIG_TEXT)
        b = PipelineConfig.from_kv(CONFIG_TEXT + "# comment\n")
        assert a.config_hash() != b.config_hash()
