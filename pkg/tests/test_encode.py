from knotgraph.decode import validate_graph
from knotgraph.encode import KnotGraph, alternation_attr, distance_attr, encode
from knotgraph.moves import ShuffleConfig, shuffle
from knotgraph.rational import rational_diagram


class TestStructure:
    def test_trefoil_graph(self, trefoil):
        g = encode(trefoil)
        assert g.num_nodes == 5
        assert len(g.edges) == 6
        assert all(e.alternation == 1 for e in g.edges)
        quad_ok, label_ok, _ = validate_graph(g)
        assert quad_ok and label_ok

    def test_figure8_graph(self, figure8):
        g = encode(figure8)
        assert g.num_nodes == 6
        assert len(g.edges) == 8
        assert validate_graph(g)[:2] == (True, True)

    def test_counts_follow_euler(self):
        for coeffs in ([5], [2, 2], [3, 1, 2], [2, 2, 2, 3]):
            d = rational_diagram(coeffs)
            g = encode(d)
            assert g.num_nodes == d.n + 2
            assert len(g.edges) == 2 * d.n

    def test_no_self_loops(self, figure8):
        g = encode(figure8)
        assert all(e.u != e.v for e in g.edges)

    def test_rotation_covers_all_ends(self, figure8):
        g = encode(figure8)
        ends = [end for node in g.rotation for end in node]
        assert len(ends) == 4 * figure8.n
        assert len(set(ends)) == len(ends)


class TestAlternation:
    def test_alternating_diagram_all_positive(self, trefoil, figure8):
        for d in (trefoil, figure8):
            assert all(alternation_attr(d, ell) == 1 for ell in range(2 * d.n))

    def test_kink_loop_edge_positive(self, kink):
        # the loop passes over at one end of its visit and under at the other
        assert alternation_attr(kink, 0) == 1
        assert alternation_attr(kink, 1) == 1

    def test_poke_produces_negative(self, trefoil):
        from knotgraph.moves import apply, find_sites

        grown = apply(trefoil, find_sites(trefoil, "R2_ADD")[0])
        attrs = [alternation_attr(grown, ell) for ell in range(10)]
        assert -1 in attrs  # the strand between the two new same-over crossings


class TestDistance:
    def test_activation_fixed_points(self):
        assert 1.0 - 2.0 ** (-15 / 15.0) == 0.5
        assert 1.0 - 2.0 ** (-0 / 15.0) == 0.0

    def test_trefoil_distances(self, trefoil):
        # hand enumeration: each edge's two transversal midpoints are one
        # step apart on the six-edge cycle
        assert [distance_attr(trefoil, ell)[0] for ell in range(6)] == [1] * 6

    def test_figure8_distances(self, figure8):
        raws = [distance_attr(figure8, ell)[0] for ell in range(8)]
        assert sorted(raws) == [1, 1, 1, 1, 3, 3, 3, 3]

    def test_raw_range_and_monotone_activation(self):
        d = rational_diagram([4, 3, 3])
        pairs = [distance_attr(d, ell) for ell in range(2 * d.n)]
        for raw, act in pairs:
            assert 0 <= raw <= d.n
            assert 0.0 <= act < 1.0
            assert act == 1.0 - 2.0 ** (-raw / 15.0)

    def test_custom_scale(self, trefoil):
        raw, act = distance_attr(trefoil, 0, d_s=1.0)
        assert raw == 1 and act == 0.5

    def test_paper_literal_variant(self, trefoil):
        # agrees away from the label wraparound, diverges across it; the
        # divergence is the reason the circular walk is the default
        literals = [distance_attr(trefoil, ell, paper_literal=True)[0] for ell in range(6)]
        assert literals == [1, 1, 2, 2, 1, 1]
        assert [distance_attr(trefoil, ell)[0] for ell in range(6)] == [1] * 6

    def test_paper_literal_mode_recorded(self, trefoil):
        g = encode(trefoil, paper_literal_distance=True)
        assert g.distance_mode == "paper_literal"


class TestEquivariance:
    def test_relabel_keeps_attributes(self, figure8):
        base = encode(figure8)
        for start in range(8):
            shifted = encode(figure8.enumerate_edges(start))
            assert sorted(
                (e.alternation, e.raw_distance) for e in shifted.edges
            ) == sorted((e.alternation, e.raw_distance) for e in base.edges)
            # labels shift but the underlying topology is identical
            assert shifted.num_nodes == base.num_nodes

    def test_mirror_blindness(self, trefoil, figure8):
        for d in (trefoil, figure8):
            g = encode(d)
            m = encode(d.mirror())
            assert [(e.u, e.v, e.raw_label, e.alternation, e.raw_distance) for e in g.edges] == [
                (e.u, e.v, e.raw_label, e.alternation, e.raw_distance) for e in m.edges
            ]
            assert g.rotation == m.rotation


class TestJson:
    def test_round_trip(self, figure8):
        g = encode(figure8)
        back = KnotGraph.from_json_obj(g.to_json_obj())
        assert back.edges == g.edges
        assert back.rotation == g.rotation
        assert back.num_nodes == g.num_nodes

    def test_shuffled_graphs_serialize(self, trefoil):
        d = shuffle(trefoil, ShuffleConfig(c=12, seed=3))
        g = encode(d)
        obj = g.to_json_obj()
        assert len(obj["edges"]) == 4 * d.n
        assert all(len(a) == 2 for a in obj["edge_attr"])
        back = KnotGraph.from_json_obj(obj)
        assert validate_graph(back)[:2] == (True, True)
