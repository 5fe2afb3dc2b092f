"""CSV ingestion, shuffle augmentation, splits, and JSONL emission.

The pipeline turns a base-knot CSV into learning-ready graph samples:
parse each PD code, produce seeded shuffled variants, encode each variant
as an attributed graph, append the knot's feature vector (standardized
over the train split), and write one JSON object per line.  Identical
(CSV, config, seed) inputs produce byte-identical output files.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .decode import validate_graph
from .diagram import Diagram, DiagramError, parse_pd
from .encode import DEFAULT_DISTANCE_SCALE, encode
from .moves import ShuffleConfig, shuffle

__all__ = [
    "DatasetError",
    "FEATURE_NAMES",
    "TARGET_NAMES",
    "KnotRecord",
    "IngestReport",
    "SplitSpec",
    "PipelineConfig",
    "ingest_csv",
    "augment",
    "split",
    "build_sample",
    "emit",
    "run_pipeline",
]

# Nine named per-knot features plus one reserved slot (kept 0.0) so the
# appended vector always has ten entries.
FEATURE_NAMES = (
    "alternating",
    "fibered",
    "positive_braid",
    "small_or_large",
    "crossing_number",
    "signature",
    "arc_index",
    "determinant",
    "rasmussen_s",
    "reserved",
)

TARGET_NAMES = ("volume", "rasmussen_s", "tau", "q_positivity", "signature", "determinant")

_BOOL_TOKENS = {
    "y": 1.0, "yes": 1.0, "true": 1.0, "t": 1.0, "1": 1.0, "+1": 1.0,
    "n": -1.0, "no": -1.0, "false": -1.0, "f": -1.0, "0": -1.0, "-1": -1.0,
}


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class KnotRecord:
    name: str
    pd: str
    crossing_number: int
    features: tuple[float, ...]
    targets: tuple[tuple[str, float], ...]

    def target(self, name: str) -> float | None:
        for key, value in self.targets:
            if key == name:
                return value
        return None


@dataclass
class IngestReport:
    total_rows: int = 0
    kept: int = 0
    skipped: list[tuple[int, str]] = field(default_factory=list)


@dataclass(frozen=True)
class SplitSpec:
    """How base knots are divided; splitting is always by knot, never by
    sample, so no knot's shuffles leak across the boundary."""

    mode: str  # RANDOM_HOLDOUT | BY_SOLVED_CROSSINGS | LARGE_KNOTS
    fraction: float = 0.20
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("RANDOM_HOLDOUT", "BY_SOLVED_CROSSINGS", "LARGE_KNOTS"):
            raise DatasetError(f"unknown split mode {self.mode!r}")
        if not 0.0 < self.fraction < 1.0:
            raise DatasetError("holdout fraction must be in (0, 1)")


@dataclass
class PipelineConfig:
    """Column mapping plus generation parameters, parsed from key=value text."""

    mapping: dict[str, str]
    versions: int = 10
    c_min: int = 20
    c_max: int = 60
    target: str = "determinant"
    d_s: float = DEFAULT_DISTANCE_SCALE
    include_original: bool = True
    min_crossings: int = 0  # >0: escalate c until every sample reaches it
    text: str = ""

    @classmethod
    def from_kv(cls, text: str) -> "PipelineConfig":
        mapping: dict[str, str] = {}
        params: dict[str, str] = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise DatasetError(f"config line without '=': {line!r}")
            key, value = key.strip(), value.strip()
            if key in ("name", "pd", "crossing_number") or key.startswith(("feature.", "target.")):
                mapping[key] = value
            else:
                params[key] = value
        for required in ("name", "pd", "crossing_number"):
            if required not in mapping:
                raise DatasetError(f"config must map the {required!r} column")
        cfg = cls(mapping=mapping, text=text)
        if "versions" in params:
            cfg.versions = int(params["versions"])
        if "c_min" in params:
            cfg.c_min = int(params["c_min"])
        if "c_max" in params:
            cfg.c_max = int(params["c_max"])
        if "target" in params:
            cfg.target = params["target"]
        if "d_s" in params:
            cfg.d_s = float(params["d_s"])
        if "include_original" in params:
            cfg.include_original = params["include_original"].lower() in ("1", "true", "yes")
        if "min_crossings" in params:
            cfg.min_crossings = int(params["min_crossings"])
        if cfg.versions < 1:
            raise DatasetError("versions must be >= 1")
        if not 1 <= cfg.c_min <= cfg.c_max:
            raise DatasetError("need 1 <= c_min <= c_max")
        if cfg.target not in TARGET_NAMES:
            raise DatasetError(f"unknown target {cfg.target!r}")
        return cfg

    def config_hash(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()[:16]


def _parse_number(token: str) -> float:
    token = token.strip()
    lowered = token.lower()
    if lowered in _BOOL_TOKENS:
        return _BOOL_TOKENS[lowered]
    return float(token)


def ingest_csv(path: str | Path, mapping: dict[str, str]) -> tuple[list[KnotRecord], IngestReport]:
    """Read base knots; rows with unparseable PD are skipped and reported.

    ``mapping`` names the CSV columns: keys ``name``, ``pd``,
    ``crossing_number``, ``feature.<f>`` and ``target.<t>``.  Every mapped
    column must exist.  Unmapped features default to 0.0; a missing target
    value only excludes the record from that target's task.
    """
    path = Path(path)
    with path.open(newline="") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        for key, column in mapping.items():
            if column not in header:
                raise DatasetError(f"mapped column {column!r} (for {key}) not in CSV header")
        report = IngestReport()
        records: list[KnotRecord] = []
        for line_no, row in enumerate(reader, start=2):
            report.total_rows += 1
            raw_pd = row[mapping["pd"]].strip().replace("[", "(").replace("]", ")")
            if raw_pd.startswith("PD("):
                raw_pd = raw_pd[3:-1]
            try:
                parse_pd(raw_pd)
            except DiagramError as exc:
                report.skipped.append((line_no, str(exc)))
                continue
            features = []
            for fname in FEATURE_NAMES:
                column = mapping.get(f"feature.{fname}")
                value = row.get(column, "").strip() if column else ""
                features.append(_parse_number(value) if value else 0.0)
            targets = []
            for tname in TARGET_NAMES:
                column = mapping.get(f"target.{tname}")
                if column:
                    value = row.get(column, "").strip()
                    if value:
                        targets.append((tname, _parse_number(value)))
            records.append(
                KnotRecord(
                    name=row[mapping["name"]].strip(),
                    pd=raw_pd,
                    crossing_number=int(float(row[mapping["crossing_number"]])),
                    features=tuple(features),
                    targets=tuple(targets),
                )
            )
            report.kept += 1
    if not records:
        raise DatasetError(f"no valid rows in {path}")
    return records, report


def record_seed_sequence(root_seed: int, record_index: int) -> np.random.SeedSequence:
    """Child RNG stream for one record: spawn key = record index."""
    return np.random.SeedSequence(entropy=root_seed, spawn_key=(record_index,))


def augment(
    record: KnotRecord,
    versions: int,
    c_sampler,
    seed: np.random.SeedSequence | int,
    include_original: bool = True,
    min_crossings: int = 0,
) -> list[tuple[Diagram, dict]]:
    """The unshuffled base diagram plus ``versions`` seeded shuffles.

    ``c_sampler(rng)`` draws the complexity per version.  When
    ``min_crossings`` is positive, c escalates by 20 and the shuffle is
    redrawn until the result is large enough.
    """
    if versions < 1:
        raise DatasetError("versions must be >= 1")
    seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    rng = np.random.Generator(np.random.PCG64(seq))
    base = parse_pd(record.pd)
    out: list[tuple[Diagram, dict]] = []
    if include_original:
        out.append((base, {"name": f"{record.name}#base", "base": record.name,
                           "seed": -1, "c": 0}))
    for v in range(versions):
        c = int(c_sampler(rng))
        while True:
            shuffle_seed = int(rng.integers(0, 2**62))
            shuffled = shuffle(base, ShuffleConfig(c=c, seed=shuffle_seed))
            if min_crossings <= 0 or shuffled.n >= min_crossings:
                break
            c += 20
        out.append(
            (shuffled, {"name": f"{record.name}#v{v}", "base": record.name,
                        "seed": shuffle_seed, "c": c})
        )
    return out


def uniform_c_sampler(c_min: int, c_max: int):
    def sampler(rng: np.random.Generator) -> int:
        return int(rng.integers(c_min, c_max + 1))
    return sampler


def split(records: list[KnotRecord], spec: SplitSpec) -> tuple[list[int], list[int]]:
    """Indices of train and test records; disjoint, exhaustive over the
    eligible records, and stable for a fixed seed."""
    if spec.mode == "RANDOM_HOLDOUT":
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(spec.seed)))
        order = rng.permutation(len(records))
        n_test = max(1, round(spec.fraction * len(records)))
        if n_test >= len(records):
            raise DatasetError("holdout leaves an empty train side")
        test = sorted(int(i) for i in order[:n_test])
        train = sorted(int(i) for i in order[n_test:])
    elif spec.mode == "BY_SOLVED_CROSSINGS":
        train = [i for i, r in enumerate(records) if r.crossing_number <= 11]
        test = [i for i, r in enumerate(records) if r.crossing_number == 12]
    else:  # LARGE_KNOTS: everything trains; testing uses the big corpus
        train = list(range(len(records)))
        test = []
    if not train or (not test and spec.mode == "BY_SOLVED_CROSSINGS"):
        raise DatasetError(f"split {spec.mode} produced an empty side")
    return train, test


def build_sample(
    diagram: Diagram,
    record: KnotRecord,
    provenance: dict,
    target_name: str,
    d_s: float = DEFAULT_DISTANCE_SCALE,
) -> dict:
    """One learning sample: validated graph topology plus attributes.

    The graph is checked against the reconstruction preconditions (quad
    faces, consecutive opposite labels) before the labels are stripped.
    """
    graph = encode(diagram, d_s=d_s)
    quad_ok, label_ok, diagnostics = validate_graph(graph)
    if not (quad_ok and label_ok):
        raise DatasetError(f"{provenance['name']}: encoder output failed validation: {diagnostics}")
    target_value = record.target(target_name)
    if target_value is None:
        raise DatasetError(f"{record.name} has no value for target {target_name!r}")
    edges = []
    edge_attr = []
    for e in graph.edges:
        edges.append([e.u, e.v])
        edges.append([e.v, e.u])
        attr = [float(e.alternation), e.activated_distance]
        edge_attr.append(attr)
        edge_attr.append(list(attr))
    degrees = graph.degrees()
    top = max(degrees)
    return {
        "name": provenance["name"],
        "base": provenance["base"],
        "seed": provenance["seed"],
        "crossings": diagram.n,
        "num_nodes": graph.num_nodes,
        "edges": edges,
        "edge_attr": edge_attr,
        "node_attr": [[1.0, deg / top] for deg in degrees],
        "features": list(record.features),
        "target": float(target_value),
        "target_name": target_name,
    }


def standardize_features(samples: list[dict], train_names: set[str]) -> dict:
    """Zero-mean unit-variance scaling fit on train samples, applied to all."""
    train_rows = np.array(
        [s["features"] for s in samples if s["base"] in train_names], dtype=np.float64
    )
    mean = train_rows.mean(axis=0)
    std = train_rows.std(axis=0)
    std[std < 1e-12] = 1.0
    for s in samples:
        scaled = (np.asarray(s["features"], dtype=np.float64) - mean) / std
        s["features"] = [float(x) for x in scaled]
    return {"mean": [float(x) for x in mean], "std": [float(x) for x in std]}


def emit(samples: list[dict], path: str | Path, manifest_extra: dict | None = None) -> dict:
    """Write one sample per line; the manifest lands next to the JSONL."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    crossings = [s["crossings"] for s in samples]
    with path.open("w") as handle:
        for s in samples:
            handle.write(json.dumps(s, separators=(",", ":")) + "\n")
    manifest = {
        "count": len(samples),
        "mean_crossings": float(np.mean(crossings)) if crossings else 0.0,
        "std_crossings": float(np.std(crossings)) if crossings else 0.0,
    }
    if manifest_extra:
        manifest.update(manifest_extra)
    manifest_path = path.with_suffix(path.suffix + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def run_pipeline(
    csv_path: str | Path,
    config: PipelineConfig,
    out_path: str | Path,
    split_spec: SplitSpec,
    seed: int = 0,
) -> dict:
    """Full run: ingest, split by base knot, augment, encode, emit."""
    records, report = ingest_csv(csv_path, config.mapping)
    eligible = [r for r in records if r.target(config.target) is not None]
    if not eligible:
        raise DatasetError(f"no record carries target {config.target!r}")
    train_ids, test_ids = split(eligible, split_spec)
    train_names = {eligible[i].name for i in train_ids}
    sampler = uniform_c_sampler(config.c_min, config.c_max)
    samples: list[dict] = []
    for index, record in enumerate(eligible):
        variants = augment(
            record,
            versions=config.versions,
            c_sampler=sampler,
            seed=record_seed_sequence(seed, index),
            include_original=config.include_original,
            min_crossings=config.min_crossings,
        )
        for diagram, provenance in variants:
            if config.min_crossings > 0 and diagram.n < config.min_crossings:
                continue  # the unshuffled original in a large-knot run
            samples.append(
                build_sample(diagram, record, provenance, config.target, d_s=config.d_s)
            )
    standardization = standardize_features(samples, train_names)
    manifest_extra = {
        "seed": seed,
        "config_hash": config.config_hash(),
        "target": config.target,
        "splits": {
            "mode": split_spec.mode,
            "train": sorted(eligible[i].name for i in train_ids),
            "test": sorted(eligible[i].name for i in test_ids),
        },
        "feature_standardization": standardization,
        "ingest": {"rows": report.total_rows, "kept": report.kept,
                   "skipped": len(report.skipped)},
    }
    return emit(samples, out_path, manifest_extra)
