"""Success metrics: degree factor, stretch, diameters, and run summaries.

Everything is measured against the shadow graph G': degree ratios divide a
live node's healed degree by its shadow degree (which counts edges to deleted
neighbors), and stretch divides live distances by shadow distances computed
through deleted nodes.

Ratios are kept as exact integer Fractions until CSV formatting, so outputs
are byte-stable across platforms.

Exact all-pairs distances use a dense reachability iteration over a float32
adjacency matrix (one BLAS matmul per distance level), which is what makes
per-timestep exact stretch affordable over large trial corpora. The pure-BFS
implementations in `graph` stay the independent oracle; the test suite
cross-checks the two on every random graph it draws. Above the exact cap,
stretch falls back to a seeded sample of live pairs, and the record notes
which mode produced it.

All functions are pure snapshots-in, values-out; records from finished runs
can be crunched in parallel.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import median

import numpy as np

from .graph import INF, Graph

CSV_COLUMNS = [
    "t",
    "op",
    "node",
    "connected",
    "max_degree_ratio",
    "max_stretch",
    "stretch_mode",
    "diameter_live",
    "diameter_shadow",
    "messages",
    "rounds",
    "max_hops",
    "edges_added",
    "edges_dropped",
    "virtual_count",
]

CSV_HEADER = ",".join(CSV_COLUMNS)


class ZeroShadowDegreeError(ValueError):
    """A live node has shadow degree 0: an engine invariant was breached."""


@dataclass
class MetricsRecord:
    t: int
    op: str
    node: int
    connected: bool
    max_degree_ratio: Fraction
    max_stretch: object  # Fraction, INF, or None when not computed
    stretch_mode: str  # "exact" | "sampled" | "skipped"
    diameter_live: object  # int, INF, or None when skipped
    diameter_shadow: object
    messages: int
    rounds: int
    max_hops: int
    edges_added: int
    edges_dropped: int
    virtual_count: int
    # Not CSV columns; carried for threshold evaluation and benchmarks.
    shadow_nodes: int = 0
    live_nodes: int = 0
    touched_count: int = 0


# -- degree factor ------------------------------------------------------------


def degree_ratio_max(
    live: Graph, shadow: Graph, deleted: set[int] | None = None
) -> tuple[Fraction, int | None]:
    """max over live nodes of degree(v, live) / degree(v, shadow).

    Ties break toward the smallest id. Returns (Fraction(1), None) when the
    live graph is empty. A live node with shadow degree 0 signals an engine
    invariant breach and raises.
    """
    best = Fraction(1)
    arg: int | None = None
    for v in sorted(live.nodes):
        if deleted is not None and v in deleted:
            raise ZeroShadowDegreeError(f"node {v} is both live and deleted")
        shadow_deg = shadow.degree(v)
        if shadow_deg == 0:
            if live.degree(v) == 0:
                continue
            raise ZeroShadowDegreeError(f"live node {v} has shadow degree 0")
        ratio = Fraction(live.degree(v), shadow_deg)
        if ratio > best:
            best, arg = ratio, v
    return best, arg


# -- exact all-pairs distances ---------------------------------------------------


def all_pairs_distances(g: Graph) -> tuple[np.ndarray, dict[int, int]]:
    """Dense hop-count matrix (np.inf where disconnected) and node->row index.

    Level-by-level reachability: newly reached pairs at iteration d are at
    distance d. float32 matmuls stay exact here (entries are counts < 2^24).
    """
    nodes = sorted(g.nodes)
    index = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    dist = np.full((n, n), np.inf)
    if n == 0:
        return dist, index
    np.fill_diagonal(dist, 0.0)
    adj = np.zeros((n, n), dtype=np.float32)
    for v in nodes:
        i = index[v]
        for w in g.neighbors(v):
            adj[i, index[w]] = 1.0
    dist[adj > 0] = 1.0
    reached = (adj + np.eye(n, dtype=np.float32)) > 0
    d = 1
    while True:
        frontier = (reached.astype(np.float32) @ adj) > 0
        new = frontier & ~reached
        if not new.any():
            break
        d += 1
        dist[new] = d
        reached |= new
    return dist, index


def diameter_from(dist: np.ndarray) -> object:
    """Max pairwise distance: 0 for <= 1 node, INF when disconnected."""
    if dist.size <= 1:
        return 0
    if np.isinf(dist).any():
        return INF
    return int(dist.max())


# -- stretch ---------------------------------------------------------------------


@dataclass
class StretchResult:
    max_stretch: object  # Fraction or INF or None
    mode: str
    diameter_live: object
    argmax_pair: tuple[int, int] | None = None


def stretch_max(
    live: Graph,
    shadow_dist: np.ndarray,
    shadow_index: dict[int, int],
    exact_cap: int = 256,
    samples: int = 1000,
    rng: random.Random | None = None,
) -> StretchResult:
    """max over live pairs of dist_live(u, v) / dist_shadow(u, v).

    Exact over all pairs while the live graph fits the cap, else over a
    seeded sample of pairs. INF when the live graph is disconnected; pairs
    never joined in the shadow graph contribute nothing. Returns 1 when
    there are fewer than two live nodes.
    """
    n = live.node_count
    if n <= 1:
        return StretchResult(Fraction(1), "exact", 0)
    if n <= exact_cap:
        return _stretch_exact(live, shadow_dist, shadow_index)
    if samples <= 0:
        return StretchResult(None, "skipped", None)
    return _stretch_sampled(live, shadow_dist, shadow_index, samples, rng or random.Random(0))


def _stretch_exact(
    live: Graph, shadow_dist: np.ndarray, shadow_index: dict[int, int]
) -> StretchResult:
    live_dist, live_index = all_pairs_distances(live)
    diameter_live = diameter_from(live_dist)
    if diameter_live is INF:
        return StretchResult(INF, "exact", INF)
    nodes = sorted(live.nodes)
    rows = np.array([shadow_index[v] for v in nodes])
    shadow_sub = shadow_dist[np.ix_(rows, rows)]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = live_dist / shadow_sub
    # Off-diagonal finite-shadow pairs only; shadow-infinite pairs drop out.
    ratio[~np.isfinite(ratio)] = 0.0
    np.fill_diagonal(ratio, 0.0)
    flat = int(ratio.argmax())
    i, j = divmod(flat, len(nodes))
    if ratio[i, j] == 0.0:
        return StretchResult(Fraction(1), "exact", diameter_live)
    value = Fraction(int(live_dist[i, j]), int(shadow_sub[i, j]))
    return StretchResult(value, "exact", diameter_live, (nodes[i], nodes[j]))


def _stretch_sampled(
    live: Graph,
    shadow_dist: np.ndarray,
    shadow_index: dict[int, int],
    samples: int,
    rng: random.Random,
) -> StretchResult:
    nodes = sorted(live.nodes)
    best: object = Fraction(1)
    best_pair = None
    diameter_seen = 0
    cache: dict[int, dict[int, int]] = {}
    for _ in range(samples):
        u, v = rng.sample(nodes, 2)
        if u not in cache:
            cache[u] = live.bfs_distances(u)
        d_live = cache[u].get(v)
        if d_live is None:
            return StretchResult(INF, "sampled", INF, (u, v))
        diameter_seen = max(diameter_seen, d_live)
        d_shadow = shadow_dist[shadow_index[u], shadow_index[v]]
        if not np.isfinite(d_shadow):
            continue
        ratio = Fraction(d_live, int(d_shadow))
        if ratio > best:
            best, best_pair = ratio, (u, v)
    return StretchResult(best, "sampled", diameter_seen, best_pair)


# -- summaries --------------------------------------------------------------------


def hard_stretch_bound(shadow_nodes: int) -> int:
    return 2 * _ceil_log2(shadow_nodes)


def target_stretch_bound(shadow_nodes: int) -> int:
    return _ceil_log2(shadow_nodes)


def _ceil_log2(x: int) -> int:
    if x <= 1:
        return 0
    return (x - 1).bit_length()


HARD_DEGREE_BOUND = Fraction(4)
TARGET_DEGREE_BOUND = Fraction(3)


@dataclass
class Summary:
    records: int = 0
    disconnects: int = 0
    hard_degree_violations: int = 0
    target_degree_violations: int = 0
    hard_stretch_violations: int = 0
    target_stretch_violations: int = 0
    max_degree_ratio: float = 0.0
    max_stretch: float = 0.0
    median_messages: float = 0.0
    max_messages: int = 0
    median_rounds: float = 0.0
    max_rounds: int = 0
    median_max_hops: float = 0.0
    max_max_hops: int = 0
    edges_added: int = 0
    edges_dropped: int = 0
    violations: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "records": self.records,
            "disconnects": self.disconnects,
            "hard_degree_violations": self.hard_degree_violations,
            "target_degree_violations": self.target_degree_violations,
            "hard_stretch_violations": self.hard_stretch_violations,
            "target_stretch_violations": self.target_stretch_violations,
            "max_degree_ratio": self.max_degree_ratio,
            "max_stretch": self.max_stretch,
            "median_messages": self.median_messages,
            "max_messages": self.max_messages,
            "median_rounds": self.median_rounds,
            "max_rounds": self.max_rounds,
            "median_max_hops": self.median_max_hops,
            "max_max_hops": self.max_max_hops,
            "edges_added": self.edges_added,
            "edges_dropped": self.edges_dropped,
            "violations": self.violations,
        }


def summarize(records: list[MetricsRecord]) -> Summary:
    """Maxima, medians and threshold-violation counts for one run.

    Hard bounds are construction-guaranteed (degree 4x, stretch
    2*ceil(log2 n')); target bounds are the reported aspirations (3x,
    ceil(log2 n')), counted but not asserted here.
    """
    s = Summary(records=len(records))
    if not records:
        return s
    for r in records:
        if not r.connected:
            s.disconnects += 1
            s.violations.append(f"t={r.t}: disconnected")
        if r.max_degree_ratio > HARD_DEGREE_BOUND:
            s.hard_degree_violations += 1
            s.violations.append(f"t={r.t}: degree ratio {r.max_degree_ratio} > 4")
        if r.max_degree_ratio > TARGET_DEGREE_BOUND:
            s.target_degree_violations += 1
        if isinstance(r.max_stretch, Fraction) or r.max_stretch is INF:
            if r.shadow_nodes > 1:
                hard = hard_stretch_bound(r.shadow_nodes)
                target = target_stretch_bound(r.shadow_nodes)
                if r.max_stretch is INF or r.max_stretch > hard:
                    s.hard_stretch_violations += 1
                    s.violations.append(
                        f"t={r.t}: stretch {format_number(r.max_stretch)} > {hard}"
                    )
                if r.max_stretch is INF or r.max_stretch > target:
                    s.target_stretch_violations += 1
    s.max_degree_ratio = float(max(r.max_degree_ratio for r in records))
    stretches = [r.max_stretch for r in records if isinstance(r.max_stretch, Fraction)]
    if any(r.max_stretch is INF for r in records):
        s.max_stretch = math.inf
    elif stretches:
        s.max_stretch = float(max(stretches))
    s.median_messages = float(median(r.messages for r in records))
    s.max_messages = max(r.messages for r in records)
    s.median_rounds = float(median(r.rounds for r in records))
    s.max_rounds = max(r.rounds for r in records)
    s.median_max_hops = float(median(r.max_hops for r in records))
    s.max_max_hops = max(r.max_hops for r in records)
    s.edges_added = sum(r.edges_added for r in records)
    s.edges_dropped = sum(r.edges_dropped for r in records)
    return s


# -- CSV ---------------------------------------------------------------------------


def format_number(x) -> str:
    """Stable text for ratios and hop counts: '.' decimals, 'inf', 'na'."""
    if x is None:
        return "na"
    if x is INF or x == math.inf:
        return "inf"
    if isinstance(x, Fraction):
        return repr(float(x))
    if isinstance(x, float):
        return repr(x)
    return str(x)


def record_to_row(r: MetricsRecord) -> str:
    return ",".join(
        [
            str(r.t),
            r.op,
            str(r.node),
            "true" if r.connected else "false",
            format_number(r.max_degree_ratio),
            format_number(r.max_stretch),
            r.stretch_mode,
            format_number(r.diameter_live),
            format_number(r.diameter_shadow),
            str(r.messages),
            str(r.rounds),
            str(r.max_hops),
            str(r.edges_added),
            str(r.edges_dropped),
            str(r.virtual_count),
        ]
    )


def records_to_csv(records: list[MetricsRecord]) -> str:
    lines = [CSV_HEADER]
    lines.extend(record_to_row(r) for r in records)
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> list[dict[str, str]]:
    """Re-read a metrics CSV into per-row dicts of raw column strings."""
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("bad metrics CSV header")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(CSV_COLUMNS):
            raise ValueError(f"line {lineno}: expected {len(CSV_COLUMNS)} columns")
        row = dict(zip(CSV_COLUMNS, parts))
        int(row["t"])  # type sanity; raises on corruption
        rows.append(row)
    return rows
