"""Knot diagrams as attributed face-dual graphs.

Parse PD codes, apply and detect Reidemeister moves, shuffle diagrams
into complex ambient-isotopic variants, encode them as graphs a GNN can
consume, reconstruct diagrams back from graphs, and verify everything
against two independent determinant oracles.
"""

from .dataset import KnotRecord, PipelineConfig, SplitSpec, augment, emit, ingest_csv, run_pipeline, split
from .decode import ReconstructionReport, reconstruct, validate_graph
from .diagram import Crossing, Diagram, DiagramError, Face, canonical_gauss, gauss_code, gauss_text, parse_pd, render_pd
from .encode import GraphEdge, KnotGraph, alternation_attr, distance_attr, encode
from .invariants import checkerboard_coloring, goeritz_determinant, kauffman_determinant
from .moves import MoveSite, ShuffleConfig, SimplifyResult, apply, find_sites, shuffle, simplify
from .rational import rational_diagram, twist_fraction

__version__ = "0.1.0"
