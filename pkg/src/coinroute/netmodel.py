"""Network data model: load-to-cost curves, topologies, and the scenario text format."""

import math
from dataclasses import dataclass, field


class TopologyError(ValueError):
    """Raised when a scenario description or topology is structurally invalid."""


COST_FORMS = ("affine", "affinelog", "power", "zero")


@dataclass(frozen=True)
class CostSpec:
    """Monotone nondecreasing per-packet cost curve attached to one router.

    Forms: affine a + b*x, affinelog a + b*log(1+x), power b*x**p, zero.
    """

    form: str
    a: float = 0.0
    b: float = 0.0
    p: float = 1.0

    def __post_init__(self):
        if self.form not in COST_FORMS:
            raise TopologyError(f"unknown cost form {self.form!r}")
        if self.a < 0 or self.b < 0:
            raise TopologyError("cost coefficients a and b must be nonnegative")
        if self.form == "power" and self.p < 1:
            raise TopologyError("power exponent must be >= 1")

    def __call__(self, load: float) -> float:
        """Per-packet cost at the given load. Load must be nonnegative."""
        if load < 0:
            raise ValueError(f"negative load {load!r}")
        if self.form == "zero":
            return 0.0
        if self.form == "affine":
            return self.a + self.b * load
        if self.form == "affinelog":
            return self.a + self.b * math.log1p(load)
        return self.b * load ** self.p

    def coeffs(self):
        if self.form == "zero":
            return ()
        if self.form == "power":
            return (self.b, self.p)
        return (self.a, self.b)


def parse_cost_spec(form: str, coeffs) -> CostSpec:
    """Build a CostSpec from a form token and its coefficient list."""
    form = form.replace("-", "")
    vals = [float(c) for c in coeffs]
    if form == "zero":
        if vals:
            raise TopologyError("zero form takes no coefficients")
        return CostSpec("zero")
    if form == "power":
        if len(vals) != 2:
            raise TopologyError("power form takes coefficients b p")
        return CostSpec("power", b=vals[0], p=vals[1])
    if form in ("affine", "affinelog"):
        if len(vals) != 2:
            raise TopologyError(f"{form} form takes coefficients a b")
        return CostSpec(form, a=vals[0], b=vals[1])
    raise TopologyError(f"unknown cost form {form!r}")


@dataclass(frozen=True, order=True)
class AgentKey:
    """A routing agent: one (router, destination) pair."""

    router: str
    dest: str


@dataclass
class Topology:
    """Directed routing graph with per-router cost curves and per-wave demands."""

    nodes: dict = field(default_factory=dict)      # id -> CostSpec
    edges: list = field(default_factory=list)      # (from, to), insertion order
    demands: list = field(default_factory=list)    # (source, dest, packets per wave)

    def __post_init__(self):
        self._succ = {}
        for u, v in self.edges:
            self._succ.setdefault(u, []).append(v)
        self.validate()

    def successors(self, node: str):
        return self._succ.get(node, [])

    def validate(self):
        seen = set()
        for u, v in self.edges:
            if u not in self.nodes or v not in self.nodes:
                raise TopologyError(f"edge {u}->{v} references undeclared node")
            if u == v:
                raise TopologyError(f"self-loop at {u}")
            if (u, v) in seen:
                raise TopologyError(f"duplicate edge {u}->{v}")
            seen.add((u, v))
        for s, d, n in self.demands:
            if s not in self.nodes or d not in self.nodes:
                raise TopologyError(f"demand {s}->{d} references undeclared node")
            if not isinstance(n, int) or n <= 0:
                raise TopologyError(f"demand {s}->{d} needs a positive integer rate, got {n!r}")
            if not self.route_edges(s, d):
                raise TopologyError(f"no path for demand {s}->{d}")
        for s, d, _ in self.demands:
            if self._route_has_cycle(s, d):
                raise TopologyError(f"cycle on a route from {s} to {d}")

    def _reaches(self, target: str):
        """Set of nodes from which target is reachable."""
        rev = {}
        for u, v in self.edges:
            rev.setdefault(v, []).append(u)
        out = {target}
        stack = [target]
        while stack:
            for u in rev.get(stack.pop(), []):
                if u not in out:
                    out.add(u)
                    stack.append(u)
        return out

    def route_edges(self, source: str, dest: str):
        """Edges usable by source->dest traffic: reachable from the source, leading to dest."""
        can_reach = self._reaches(dest)
        fwd = set()
        stack = [source] if source in can_reach else []
        visited = set(stack)
        edges = []
        while stack:
            u = stack.pop()
            for v in self.successors(u):
                if v in can_reach:
                    if (u, v) not in fwd:
                        fwd.add((u, v))
                        edges.append((u, v))
                    if v not in visited:
                        visited.add(v)
                        stack.append(v)
        return edges

    def _route_has_cycle(self, source: str, dest: str) -> bool:
        edges = self.route_edges(source, dest)
        succ = {}
        indeg = {}
        nodes = set()
        for u, v in edges:
            succ.setdefault(u, []).append(v)
            indeg[v] = indeg.get(v, 0) + 1
            nodes.update((u, v))
        queue = [n for n in nodes if indeg.get(n, 0) == 0]
        removed = 0
        while queue:
            u = queue.pop()
            removed += 1
            for v in succ.get(u, []):
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
        return removed != len(nodes)

    def candidates(self, router: str, dest: str):
        """Next hops from router that can still reach dest, in node-id order."""
        can_reach = self._reaches(dest)
        return sorted(v for v in self.successors(router) if v in can_reach)

    def agents(self):
        """Every (router, destination) pair that routes traffic for some demand.

        Routers on any source->dest route with at least one usable outgoing hop,
        destinations themselves excluded.
        """
        out = []
        seen = set()
        for s, d, _ in self.demands:
            on_route = {u for u, _ in self.route_edges(s, d)}
            for r in sorted(on_route):
                key = AgentKey(r, d)
                if key not in seen and self.candidates(r, d):
                    seen.add(key)
                    out.append(key)
        return sorted(out)

    def longest_path_length(self) -> int:
        """Hop count of the longest route any demand's traffic can take; default wave length."""
        best = 0
        for s, d, _ in self.demands:
            edges = self.route_edges(s, d)
            succ = {}
            for u, v in edges:
                succ.setdefault(u, []).append(v)
            memo = {}

            def longest(u):
                if u == d:
                    return 0
                if u in memo:
                    return memo[u]
                memo[u] = max(1 + longest(v) for v in succ.get(u, []))
                return memo[u]

            if edges:
                best = max(best, longest(s))
        return best


def all_paths(topo: Topology, source: str, dest: str):
    """Every simple path from source to dest, as node tuples, in lexical order."""
    succ = {}
    for u, v in topo.route_edges(source, dest):
        succ.setdefault(u, []).append(v)
    out = []

    def walk(node, trail):
        if node == dest:
            out.append(tuple(trail))
            return
        for v in sorted(succ.get(node, [])):
            walk(v, trail + [v])

    if source == dest:
        return [(source,)]
    walk(source, [source])
    return out


def strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_scenario(text: str):
    """Parse scenario text into (Topology, schedule spec or None).

    Lines: `node <id> <form> <coeffs...>`, `edge <from> <to>`,
    `demand <src> <dst> <packets-per-wave>`, `schedule L=<int|auto> W=<int>`,
    `#` comments. Unknown directives are errors.
    """
    nodes, edges, demands = {}, [], []
    schedule = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = strip_comment(raw)
        if not line:
            continue
        parts = line.split()
        kind, args = parts[0], parts[1:]
        try:
            if kind == "node":
                if len(args) < 2:
                    raise TopologyError("node line needs an id and a form")
                if args[0] in nodes:
                    raise TopologyError(f"duplicate node {args[0]}")
                nodes[args[0]] = parse_cost_spec(args[1], args[2:])
            elif kind == "edge":
                if len(args) != 2:
                    raise TopologyError("edge line needs exactly two node ids")
                edges.append((args[0], args[1]))
            elif kind == "demand":
                if len(args) != 3:
                    raise TopologyError("demand line needs source, dest, rate")
                try:
                    rate = int(args[2])
                except ValueError:
                    raise TopologyError(f"demand rate must be an integer, got {args[2]!r}")
                demands.append((args[0], args[1], rate))
            elif kind == "schedule":
                kv = dict(a.split("=", 1) for a in args if "=" in a)
                if set(kv) != {"L", "W"} or len(kv) != len(args):
                    raise TopologyError("schedule line must be `schedule L=<int|auto> W=<int>`")
                L = kv["L"] if kv["L"] == "auto" else int(kv["L"])
                schedule = (L, int(kv["W"]))
            else:
                raise TopologyError(f"unknown directive {kind!r}")
        except (TopologyError, ValueError) as exc:
            raise TopologyError(f"line {lineno}: {exc}") from None
    topo = Topology(nodes=nodes, edges=edges, demands=demands)
    if schedule is not None:
        L, W = schedule
        resolved = topo.longest_path_length() if L == "auto" else L
        if resolved <= 0:
            raise TopologyError("schedule L resolved to zero; declare demands or an explicit L")
        if W <= 0 or W % resolved != 0:
            raise TopologyError(f"W={W} must be a positive multiple of the wave length {resolved}")
    return topo, schedule


def build_topology(text: str) -> Topology:
    """Parse and validate a scenario description, returning its topology."""
    return parse_scenario(text)[0]


def serialize_topology(topo: Topology) -> str:
    """Emit a topology back to scenario text; build_topology inverts it."""
    lines = []
    for name, spec in topo.nodes.items():
        coeffs = " ".join(format(c, "g") for c in spec.coeffs())
        lines.append(f"node {name} {spec.form}{' ' if coeffs else ''}{coeffs}")
    for u, v in topo.edges:
        lines.append(f"edge {u} {v}")
    for s, d, n in topo.demands:
        lines.append(f"demand {s} {d} {n}")
    return "\n".join(lines) + "\n"
