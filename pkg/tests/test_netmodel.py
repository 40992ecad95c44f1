import math

import pytest

from coinroute import (CostSpec, Topology, TopologyError, all_paths,
                       build_topology, parse_cost_spec, parse_scenario,
                       serialize_topology)
from tests.conftest import DIAMOND


class TestCostSpec:
    def test_affine(self):
        assert CostSpec("affine", a=50.0, b=1.0)(3.0) == 53.0

    def test_affinelog(self):
        spec = CostSpec("affinelog", a=10.0, b=2.0)
        assert spec(0.0) == 10.0
        assert spec(3.0) == pytest.approx(10.0 + 2.0 * math.log(4.0))

    def test_power(self):
        assert CostSpec("power", b=1.0, p=2.0)(3.0) == 9.0

    def test_zero(self):
        assert CostSpec("zero")(7.0) == 0.0

    def test_monotone_nondecreasing(self):
        for spec in (CostSpec("affine", a=1, b=2), CostSpec("affinelog", a=0, b=3),
                     CostSpec("power", b=2, p=1.5), CostSpec("zero")):
            values = [spec(x / 4) for x in range(20)]
            assert values == sorted(values)

    def test_negative_load_rejected(self):
        with pytest.raises(ValueError):
            CostSpec("affine", a=0, b=1)(-0.5)

    def test_bad_form(self):
        with pytest.raises(TopologyError):
            CostSpec("cubic", b=1.0)

    def test_negative_coefficients(self):
        with pytest.raises(TopologyError):
            CostSpec("affine", a=-1.0, b=1.0)

    def test_sublinear_power(self):
        with pytest.raises(TopologyError):
            CostSpec("power", b=1.0, p=0.5)

    def test_parse_roundtrip(self):
        for form, coeffs in [("affine", (50, 1)), ("affinelog", (10, 2)),
                             ("power", (1, 2)), ("zero", ())]:
            spec = parse_cost_spec(form, coeffs)
            assert spec.form == form
            assert spec.coeffs() == tuple(float(c) for c in coeffs)

    def test_parse_accepts_hyphenated_form(self):
        assert parse_cost_spec("affine-log", ("1", "2")).form == "affinelog"

    def test_parse_wrong_arity(self):
        with pytest.raises(TopologyError):
            parse_cost_spec("affine", (1, 2, 3))
        with pytest.raises(TopologyError):
            parse_cost_spec("zero", (1,))


class TestParsing:
    def test_scenario_with_schedule(self):
        topo, sched = parse_scenario(DIAMOND + "schedule L=2 W=4\n")
        assert sorted(topo.nodes) == ["A", "B", "D", "S"]
        assert sched == (2, 4)

    def test_scenario_without_schedule(self):
        topo, sched = parse_scenario(DIAMOND)
        assert sched is None
        assert topo.demands == [("S", "D", 2)]

    def test_comments_and_blank_lines_ignored(self):
        text = "# header\nnode S zero\n\nnode D zero # inline\nedge S D\ndemand S D 1\n"
        topo = build_topology(text)
        assert topo.edges == [("S", "D")]

    def test_parse_error_carries_line_number(self):
        text = "node S zero\nedge S\n"
        with pytest.raises(TopologyError, match="line 2"):
            build_topology(text)

    def test_undeclared_node_rejected(self):
        with pytest.raises(TopologyError, match="undeclared"):
            build_topology("node S zero\nedge S D\n")

    def test_duplicate_edge(self):
        text = "node S zero\nnode D zero\nedge S D\nedge S D\ndemand S D 1\n"
        with pytest.raises(TopologyError, match="duplicate"):
            build_topology(text)

    def test_self_loop(self):
        with pytest.raises(TopologyError):
            build_topology("node S zero\nedge S S\ndemand S S 1\n")

    def test_nonpositive_rate(self):
        text = "node S zero\nnode D zero\nedge S D\ndemand S D 0\n"
        with pytest.raises(TopologyError):
            build_topology(text)

    def test_no_route(self):
        text = "node S zero\nnode D zero\nnode E zero\nedge S E\ndemand S D 1\n"
        with pytest.raises(TopologyError):
            build_topology(text)

    def test_cycle_on_route_rejected(self):
        text = ("node S zero\nnode A zero\nnode B zero\nnode D zero\n"
                "edge S A\nedge A B\nedge B A\nedge B D\ndemand S D 1\n")
        with pytest.raises(TopologyError):
            build_topology(text)

    def test_bad_window_multiple(self):
        with pytest.raises(TopologyError):
            parse_scenario(DIAMOND + "schedule L=2 W=5\n")

    def test_serialize_roundtrip(self, diamond):
        again = build_topology(serialize_topology(diamond))
        assert again.nodes == diamond.nodes
        assert again.edges == diamond.edges
        assert again.demands == diamond.demands


class TestTopologyQueries:
    def test_candidates_sorted(self, diamond):
        assert diamond.candidates("S", "D") == ["A", "B"]

    def test_candidates_exclude_off_route(self, shared):
        assert shared.candidates("X", "DX") == ["AX", "SH"]
        # X reaches DY through the shared link even without a demand for it
        assert shared.candidates("X", "DY") == ["SH"]

    def test_agents_enumeration(self, diamond):
        agents = diamond.agents()
        keys = [(a.router, a.dest) for a in agents]
        assert ("S", "D") in keys
        assert ("A", "D") in keys  # single-candidate relays are agents too
        assert keys == sorted(keys)

    def test_all_paths_lexical(self, diamond):
        paths = all_paths(diamond, "S", "D")
        assert paths == [("S", "A", "D"), ("S", "B", "D")]

    def test_longest_path_length(self, diamond, line):
        assert diamond.longest_path_length() == 2
        assert line.longest_path_length() == 2

    def test_route_edges_subset(self, shared):
        edges = shared.route_edges("X", "DX")
        assert ("Y", "SH") not in edges
        assert ("X", "SH") in edges and ("SH", "DX") in edges
