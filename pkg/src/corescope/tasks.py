"""Scope + Action + Target triplets: validation, execution and chaining.

A triplet is written ``scope:action:target[,key=value...]``, for example
``constituent:quantify:diameter-endpoint`` or ``subgraph:locate:clique,min_size=4``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from . import classify, detectors, similarity
from .census import distance_summary
from .detectors import ElementSet
from .errors import ArityError, ChainError, GraphError, ScopeActionError, ScopeTargetError, TaskError
from .graph import CoreGraph, fingerprint

SCOPES = ("multiple", "pair", "single", "subgraph", "constituent")
ACTIONS = ("locate", "classify", "compare", "group", "categorize", "quantify")

VALID_PAIRS = frozenset({
    ("multiple", "group"), ("multiple", "categorize"), ("multiple", "quantify"),
    ("pair", "compare"), ("pair", "quantify"),
    ("single", "classify"), ("single", "categorize"), ("single", "quantify"),
    ("subgraph", "locate"), ("subgraph", "classify"), ("subgraph", "quantify"),
    ("constituent", "locate"), ("constituent", "classify"), ("constituent", "quantify"),
})

# result variant per action; quantify varies by target so handlers set it
VARIANTS = {
    "classify": "boolean",
    "locate": "element-set",
    "categorize": "category-report",
    "compare": "compare-report",
    "group": "grouping",
}


def _coerce(text: str) -> Any:
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    for kind in (int, float):
        try:
            return kind(text)
        except ValueError:
            pass
    return text


@dataclass(frozen=True)
class TaskTriplet:
    scope: str
    action: str
    target: str
    params: tuple[tuple[str, Any], ...] = ()

    @classmethod
    def parse(cls, text: str) -> "TaskTriplet":
        head, *rest = text.strip().split(",")
        parts = head.split(":")
        if len(parts) != 3 or not all(parts):
            raise TaskError(f"expected scope:action:target, got {text!r}")
        params = []
        for item in rest:
            key, eq, value = item.partition("=")
            if not eq or not key.strip():
                raise TaskError(f"bad parameter {item!r} in {text!r}")
            params.append((key.strip().replace("-", "_"), _coerce(value.strip())))
        scope, action, target = (p.strip().lower() for p in parts)
        return cls(scope, action, target, tuple(sorted(params)))

    @property
    def param_dict(self) -> dict:
        return dict(self.params)

    def __str__(self) -> str:
        tail = "".join(f",{k}={v}" for k, v in self.params)
        return f"{self.scope}:{self.action}:{self.target}{tail}"


def _plain(value: Any) -> Any:
    if hasattr(value, "to_record"):
        return value.to_record()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass(frozen=True)
class TaskResult:
    variant: str
    value: Any
    provenance: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {"variant": self.variant, "value": _plain(self.value),
                "details": self.details, "provenance": self.provenance}


# -- registry ----------------------------------------------------------------------

Handler = Callable[..., tuple[str, Any]]


@dataclass
class TargetSpec:
    name: str
    scope: str
    handlers: dict[str, Handler]
    params: frozenset[str] = frozenset()


class Registry:
    """Targets per scope. New targets may be registered at runtime before use."""

    def __init__(self) -> None:
        self._targets: dict[tuple[str, str], TargetSpec] = {}

    def register(self, scope: str, name: str, handlers: dict[str, Handler],
                 params: Sequence[str] = ()) -> None:
        if scope not in SCOPES:
            raise ValueError(f"unknown scope {scope!r}")
        bad = [a for a in handlers if (scope, a) not in VALID_PAIRS]
        if bad:
            raise ScopeActionError(f"{scope} does not support {bad}")
        self._targets[(scope, name)] = TargetSpec(name, scope, dict(handlers), frozenset(params))

    def get(self, scope: str, name: str) -> Optional[TargetSpec]:
        return self._targets.get((scope, name))

    def targets(self, scope: Optional[str] = None) -> list[TargetSpec]:
        return [t for (s, _), t in sorted(self._targets.items()) if scope is None or s == scope]

    def combinations(self) -> list[tuple[str, str, str]]:
        return [(t.scope, a, t.name) for t in self.targets() for a in sorted(t.handlers)]


REGISTRY = Registry()


# -- handlers --------------------------------------------------------------------

def _tolerance(p: dict) -> Optional[float]:
    return p.get("tolerance", p.get("near_tolerance"))


def _category_check(name: str) -> Handler:
    def run(gs, p):
        report = classify.categorize_graph(gs[0], _tolerance(p))
        return "boolean", report.has(name)
    return run


def _category_score(name: str) -> Handler:
    base = name[5:] if name.startswith("near-") else name

    def run(gs, p):
        info = classify.categorize_graph(gs[0], _tolerance(p)).labels.get(base)
        return "measure", info.score if info else 0.0
    return run


def _measure(name: str) -> Handler:
    def run(gs, p):
        return "measure", getattr(distance_summary(gs[0]), name)
    return run


def _single_graph(gs, p):
    return "category-report", classify.categorize_graph(gs[0], _tolerance(p))


def _locator(fn: Callable[[CoreGraph, dict], ElementSet]) -> dict[str, Handler]:
    """Locate, Quantify (= cardinality of Locate) and Classify (= any found, or
    membership of ``node`` when given) from a single element-set detector."""

    def locate(gs, p):
        return "element-set", fn(gs[0], p)

    def quantify(gs, p):
        return "count", len(fn(gs[0], p))

    def check(gs, p):
        found = fn(gs[0], p)
        if "node" in p:
            return "boolean", gs[0].check_node(p["node"]) in found.nodes()
        return "boolean", len(found) > 0

    return {"locate": locate, "quantify": quantify, "classify": check}


def _geodesics(g: CoreGraph, p: dict) -> ElementSet:
    if "u" in p or "v" in p:
        report = detectors.geodesic_analysis(g, "between", p.get("u"), p.get("v"),
                                             p.get("path_cap", detectors.DEFAULT_PATH_CAP))
    else:
        report = detectors.geodesic_analysis(g, "longest", path_cap=p.get("path_cap", detectors.DEFAULT_PATH_CAP))
    if report.truncated:
        raise TaskError(f"{report.count} geodesics exceed path_cap={len(report.paths)}")
    items = [(path, {"weight": len(path) - 1}) for path in report.paths]
    return detectors.element_set("subgraphs", "geodesic", items)


def _partition_side(which: str) -> Callable[[CoreGraph, dict], ElementSet]:
    def run(g, p):
        part = detectors.core_periphery(g)
        nodes = part.core if which == "core" else part.periphery
        return detectors.element_set("nodes", which, [(v, {"weight": part.basis}) for v in nodes])
    return run


SUBGRAPH_TARGETS: dict[str, tuple[Callable[[CoreGraph, dict], ElementSet], tuple[str, ...]]] = {
    "clique": (lambda g, p: detectors.maximal_cliques(g, p.get("min_size", 3)), ("min_size",)),
    "cluster": (lambda g, p: detectors.clusters(g, p.get("density", 0.8), p.get("min_size", 4)),
                ("density", "min_size")),
    "cycle": (lambda g, p: detectors.cycles(g, p.get("max_length", detectors.DEFAULT_LACUNA_LENGTH)),
              ("max_length",)),
    "lacuna": (lambda g, p: detectors.lacunae(g, p.get("max_length", detectors.DEFAULT_LACUNA_LENGTH)),
               ("max_length",)),
    "chain": (lambda g, p: detectors.chains(g, p.get("min_interior", 1)), ("min_interior",)),
    "geodesic": (_geodesics, ("u", "v", "path_cap")),
    "core": (_partition_side("core"), ()),
    "periphery": (_partition_side("periphery"), ()),
    "star": (lambda g, p: detectors.stars(g), ()),
    "bottleneck": (lambda g, p: detectors.bottlenecks(g, p.get("max_cut", 3), p.get("balance", 0.1)),
                   ("max_cut", "balance")),
}

CONSTITUENT_TARGETS: dict[str, Callable[[CoreGraph, dict], ElementSet]] = {
    "articulation-node": lambda g, p: detectors.cut_elements(g)[0],
    "bridge-edge": lambda g, p: detectors.cut_elements(g)[1],
    "hub": lambda g, p: detectors.degree_targets(g)[0],
    "dead-end": lambda g, p: detectors.degree_targets(g)[1],
    "center-node": lambda g, p: detectors.eccentricity_targets(g)[0],
    "diameter-endpoint": lambda g, p: detectors.eccentricity_targets(g)[1],
}


def _multiple_quantify(gs, p):
    matrix = similarity.similarity_matrix(gs, p.get("metric", "portrait"))
    if p.get("output", "matrix") == "ranking":
        return "ranking", similarity.rank_matrix(matrix)
    return "matrix", matrix


def _register_defaults(reg: Registry) -> None:
    for name in classify.CLASS_NAMES + classify.NEAR_NAMES:
        handlers = {"classify": _category_check(name)}
        if name in ("tree", "complete", "regular", "multipartite") or name.startswith("near-"):
            handlers["quantify"] = _category_score(name)
        reg.register("single", name, handlers, ("tolerance", "near_tolerance"))
    for name in ("diameter", "radius", "girth"):
        reg.register("single", name, {"quantify": _measure(name)})
    reg.register("single", "graph", {"categorize": _single_graph}, ("tolerance", "near_tolerance"))

    for name, (fn, params) in SUBGRAPH_TARGETS.items():
        reg.register("subgraph", name, _locator(fn), params + ("node",))
    for name, fn in CONSTITUENT_TARGETS.items():
        reg.register("constituent", name, _locator(fn), ("node",))

    reg.register("pair", "graph", {
        "compare": lambda gs, p: ("compare-report", similarity.compare_report(gs[0], gs[1])),
        "quantify": lambda gs, p: ("measure", similarity.pair_distance(gs[0], gs[1], p.get("metric", "portrait"))),
    }, ("metric",))
    reg.register("multiple", "graph", {
        "group": lambda gs, p: ("grouping", similarity.group_graphs(
            gs, p.get("metric", "portrait"), p.get("threshold", similarity.DEFAULT_LINK_THRESHOLD))),
        "categorize": lambda gs, p: ("category-report", [classify.categorize_graph(g, _tolerance(p)) for g in gs]),
        "quantify": _multiple_quantify,
    }, ("metric", "threshold", "output", "tolerance", "near_tolerance"))


_register_defaults(REGISTRY)


# -- validation and execution -----------------------------------------------------


def validate_triplet(t: TaskTriplet, registry: Registry = REGISTRY) -> TargetSpec:
    if t.scope not in SCOPES:
        raise ScopeActionError(f"unknown scope {t.scope!r}")
    if t.action not in ACTIONS:
        raise ScopeActionError(f"unknown action {t.action!r}")
    if (t.scope, t.action) not in VALID_PAIRS:
        raise ScopeActionError(f"action {t.action} is not defined at the {t.scope} scope")
    spec = registry.get(t.scope, t.target)
    if spec is None:
        known = ", ".join(s.name for s in registry.targets(t.scope))
        raise ScopeTargetError(f"target {t.target!r} is not in the {t.scope} scope (known: {known})")
    if t.action not in spec.handlers:
        raise ScopeTargetError(f"target {t.target} does not support {t.action} "
                               f"(supports: {', '.join(sorted(spec.handlers))})")
    unknown = sorted(set(t.param_dict) - spec.params)
    if unknown:
        raise ScopeTargetError(f"unknown parameters for {t.target}: {unknown}")
    return spec


def check_arity(scope: str, count: int) -> None:
    if scope == "multiple" and count < 3:
        raise ArityError(f"the multiple scope needs at least 3 graphs, got {count}")
    if scope == "pair" and count != 2:
        raise ArityError(f"the pair scope needs exactly 2 graphs, got {count}")
    if scope in ("single", "subgraph", "constituent") and count != 1:
        raise ArityError(f"the {scope} scope works on exactly 1 graph, got {count}")


def run_task(t: TaskTriplet | str, graphs: Sequence[CoreGraph] | CoreGraph,
             registry: Registry = REGISTRY, ids: Optional[Sequence[str]] = None) -> TaskResult:
    if isinstance(t, str):
        t = TaskTriplet.parse(t)
    if isinstance(graphs, CoreGraph):
        graphs = [graphs]
    spec = validate_triplet(t, registry)
    check_arity(t.scope, len(graphs))
    params = t.param_dict
    try:
        variant, value = spec.handlers[t.action](list(graphs), params)
    except GraphError:
        raise
    except ValueError as exc:
        raise TaskError(str(exc)) from exc
    provenance = {
        "triplet": str(t),
        "params": params,
        "graphs": [fingerprint(g) for g in graphs],
    }
    if ids is not None:
        provenance["ids"] = list(ids)
    return TaskResult(variant, value, provenance)


# -- chaining ---------------------------------------------------------------------

CHAIN_OPS = ("largest", "overlap", "compare")


@dataclass(frozen=True)
class ChainStep:
    """Either a task run on input graph(s) or an operation over earlier steps."""

    name: str
    task: Optional[TaskTriplet] = None
    graphs: tuple[int, ...] = (0,)
    op: Optional[str] = None
    refs: tuple[str, ...] = ()
    params: tuple[tuple[str, Any], ...] = ()

    def __post_init__(self) -> None:
        if (self.task is None) == (self.op is None):
            raise ChainError(f"step {self.name!r} needs exactly one of task or op")
        if self.op is not None and self.op not in CHAIN_OPS:
            raise ChainError(f"unknown chain operation {self.op!r}")


_STEP = re.compile(r"^\s*(\w+)\s*=\s*(?:(\w+)\(([^)]*)\)|([^@]+?)(?:@([\d+]+))?)\s*$")


def parse_chain(text: str) -> list[ChainStep]:
    """``name=triplet[@g]`` or ``name=op(ref, ref[, key=value])``, separated by ``;``.

    ``@g`` picks input graph ``g`` (default 0); ``@0+1`` passes several.
    """
    steps = []
    for chunk in filter(str.strip, text.split(";")):
        m = _STEP.match(chunk)
        if not m:
            raise ChainError(f"cannot parse chain step {chunk!r}")
        name, op, args, triplet, where = m.groups()
        if op:
            refs, params = [], []
            for a in filter(str.strip, args.split(",")):
                key, eq, value = a.partition("=")
                if eq:
                    params.append((key.strip(), _coerce(value.strip())))
                else:
                    refs.append(a.strip())
            steps.append(ChainStep(name, op=op, refs=tuple(refs), params=tuple(sorted(params))))
        else:
            graphs = tuple(int(x) for x in where.split("+")) if where else (0,)
            steps.append(ChainStep(name, task=TaskTriplet.parse(triplet), graphs=graphs))
    return steps


def _as_elements(result: TaskResult, step: str) -> ElementSet:
    if result.variant != "element-set":
        raise ChainError(f"step {step!r} needs an element set, got {result.variant}")
    return result.value


def _largest(es: ElementSet) -> ElementSet:
    if not es.members:
        return es
    best = max(range(len(es)), key=lambda i: (es.annotations[i]["weight"], -i))
    return ElementSet(es.kind, es.target, (es.members[best],), (es.annotations[best],))


def _neighborhood(g: CoreGraph, nodes: frozenset[int]) -> CoreGraph:
    ego = set(nodes)
    for v in nodes:
        ego.update(g.adjacency[v])
    return g.induced(ego)


def chain_tasks(steps: Sequence[ChainStep], graphs: Sequence[CoreGraph] | CoreGraph,
                registry: Registry = REGISTRY) -> TaskResult:
    """Run steps in order; the last step's result is returned.

    Operations:
      largest(ref)             keep the member with the largest weight
      overlap(ref, part[, threshold=t])
                               share of ref's nodes inside part's nodes; true when > t (default 0)
      compare(ref_a, ref_b)    compare the radius-1 neighbourhoods of two element sets,
                               each taken in the graph its step ran on
    """
    if isinstance(graphs, CoreGraph):
        graphs = [graphs]
    if not steps:
        raise ChainError("empty chain")
    bound: dict[str, tuple[TaskResult, Optional[int]]] = {}
    trail = []
    result = None
    for step in steps:
        if step.name in bound:
            raise ChainError(f"step name {step.name!r} used twice")
        for ref in step.refs:
            if ref not in bound:
                raise ChainError(f"step {step.name!r} refers to unbound {ref!r}")
        if step.task is not None:
            for i in step.graphs:
                if not 0 <= i < len(graphs):
                    raise ChainError(f"step {step.name!r} uses graph {i}, but {len(graphs)} given")
            result = run_task(step.task, [graphs[i] for i in step.graphs], registry)
            home = step.graphs[0] if len(step.graphs) == 1 else None
        else:
            result, home = _run_op(step, bound, graphs)
        bound[step.name] = (result, home)
        trail.append({"name": step.name, "task": str(step.task) if step.task else None,
                      "op": step.op, "refs": list(step.refs), "graphs": list(step.graphs)})
    provenance = dict(result.provenance)
    provenance["chain"] = trail
    provenance["inputs"] = [fingerprint(g) for g in graphs]
    return TaskResult(result.variant, result.value, provenance, result.details)


def _run_op(step: ChainStep, bound: dict, graphs: Sequence[CoreGraph]) -> tuple[TaskResult, Optional[int]]:
    params = dict(step.params)
    args = [bound[r] for r in step.refs]
    prov = {"op": step.op, "refs": list(step.refs), "params": params}
    if step.op == "largest":
        if len(args) != 1:
            raise ChainError("largest takes one reference")
        (res, home), = args
        return TaskResult("element-set", _largest(_as_elements(res, step.refs[0])), prov), home
    if step.op == "overlap":
        if len(args) != 2:
            raise ChainError("overlap takes two references")
        subject = _as_elements(args[0][0], step.refs[0]).nodes()
        part = _as_elements(args[1][0], step.refs[1]).nodes()
        if args[0][1] != args[1][1]:
            raise ChainError("overlap needs both references on the same graph")
        share = len(subject & part) / len(subject) if subject else 0.0
        threshold = params.get("threshold", 0.0)
        return TaskResult("boolean", share > threshold, prov,
                          {"overlap": share, "threshold": threshold}), args[0][1]
    # compare
    if len(args) != 2:
        raise ChainError("compare takes two references")
    local = []
    for (res, home), ref in zip(args, step.refs):
        es = _as_elements(res, ref)
        if home is None:
            raise ChainError(f"step {ref!r} is not tied to a single graph")
        if not es.members:
            raise ChainError(f"step {ref!r} found nothing to compare")
        try:
            local.append(_neighborhood(graphs[home], es.nodes()))
        except GraphError as exc:
            raise ChainError(f"neighbourhood of {ref!r} is disconnected") from exc
    report = similarity.compare_report(local[0], local[1])
    return TaskResult("compare-report", report, prov,
                      {"sizes": [g.node_count for g in local]}), None
