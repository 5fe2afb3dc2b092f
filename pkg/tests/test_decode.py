import dataclasses

import pytest

from knotgraph.decode import ReconstructError, reconstruct, validate_graph
from knotgraph.diagram import canonical_gauss, parse_pd
from knotgraph.encode import GraphEdge, KnotGraph, encode
from knotgraph.invariants import goeritz_determinant
from knotgraph.moves import ShuffleConfig, shuffle
from knotgraph.rational import rational_diagram

from conftest import FIGURE8_PD, KINK_NEG_PD, KINK_POS_PD, TREFOIL_PD


def _with_edge(g: KnotGraph, index: int, **changes) -> KnotGraph:
    edges = list(g.edges)
    edges[index] = dataclasses.replace(edges[index], **changes)
    return dataclasses.replace(g, edges=tuple(edges))


class TestValidate:
    @pytest.mark.parametrize("pd", [TREFOIL_PD, FIGURE8_PD, KINK_POS_PD, KINK_NEG_PD])
    def test_encoder_output_validates(self, pd):
        g = encode(parse_pd(pd))
        quad_ok, label_ok, diagnostics = validate_graph(g)
        assert quad_ok and label_ok and not diagnostics

    def test_perturbed_label_fails_condition(self, trefoil):
        g = encode(trefoil)
        bad = _with_edge(g, 2, raw_label=(g.edges[2].raw_label + 2) % 6)
        quad_ok, label_ok, diagnostics = validate_graph(bad)
        assert quad_ok and not label_ok and diagnostics

    def test_quad_cycle_passes_labels_but_fails_globally(self):
        # a plain 4-cycle whose faces pair labels (0,1) and (2,3): the local
        # label condition holds on both quad faces, yet no 2-crossing
        # diagram exists and reconstruction must reject it
        edges = (
            GraphEdge(0, 1, 0, 1, 0, 0.0),
            GraphEdge(1, 2, 2, 1, 0, 0.0),
            GraphEdge(2, 3, 1, 1, 0, 0.0),
            GraphEdge(3, 0, 3, 1, 0, 0.0),
        )
        rotation = (
            ((0, 0), (3, 1)),
            ((2, 0), (0, 1)),
            ((1, 0), (2, 1)),
            ((3, 0), (1, 1)),
        )
        g = KnotGraph(
            num_nodes=4, edges=edges, rotation=rotation, crossings=2,
            fingerprint="", d_s=15.0, distance_mode="circular",
        )
        quad_ok, label_ok, _ = validate_graph(g)
        assert quad_ok and label_ok
        with pytest.raises(ReconstructError):
            reconstruct(g)


class TestRoundTrip:
    @pytest.mark.parametrize("pd", [TREFOIL_PD, FIGURE8_PD, KINK_POS_PD, KINK_NEG_PD])
    def test_known_diagrams(self, pd):
        d = parse_pd(pd)
        report = reconstruct(encode(d))
        assert report.quad_faces_ok and report.label_condition_ok
        assert canonical_gauss(report.diagram) == canonical_gauss(d)
        assert goeritz_determinant(report.diagram) == goeritz_determinant(d)

    def test_rationals(self):
        for coeffs in ([5], [2, 2], [3, 1, 2], [2, 1, 1, 2], [4, 3, 2, 1]):
            try:
                d = rational_diagram(coeffs)
            except Exception:
                continue
            report = reconstruct(encode(d))
            assert canonical_gauss(report.diagram) == canonical_gauss(d)

    def test_shuffled(self, figure8):
        for seed in range(8):
            d = shuffle(figure8, ShuffleConfig(c=14, seed=seed))
            report = reconstruct(encode(d))
            assert canonical_gauss(report.diagram) == canonical_gauss(d)
            assert goeritz_determinant(report.diagram) == 5

    def test_reconstruction_depends_only_on_rotation_system(self, trefoil):
        # two encodes of one diagram are equal as rotation systems and so
        # reconstruct to gauss-identical diagrams
        a = reconstruct(encode(trefoil))
        b = reconstruct(encode(trefoil))
        assert canonical_gauss(a.diagram) == canonical_gauss(b.diagram)

    def test_mirror_sources_reconstruct_identically(self, trefoil):
        # the encoding cannot see chirality, so both mirror images feed the
        # decoder the same graph and get the same canonical output
        a = reconstruct(encode(trefoil))
        b = reconstruct(encode(trefoil.mirror()))
        assert canonical_gauss(a.diagram) == canonical_gauss(b.diagram)


class TestErrors:
    def test_flipped_alternation_contradicts(self, trefoil):
        g = encode(trefoil)
        bad = _with_edge(g, 4, alternation=-1)
        with pytest.raises(ReconstructError, match="contradiction"):
            reconstruct(bad)

    def test_bad_alternation_value(self, trefoil):
        g = encode(trefoil)
        bad = _with_edge(g, 0, alternation=0)
        with pytest.raises(ReconstructError, match="alternation"):
            reconstruct(bad)

    def test_validation_failure_raises(self, trefoil):
        g = encode(trefoil)
        bad = _with_edge(g, 2, raw_label=(g.edges[2].raw_label + 2) % 6)
        with pytest.raises(ReconstructError, match="validation failed"):
            reconstruct(bad)
