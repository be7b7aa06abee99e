"""Ground truth, workload plumbing, differential runs, and baselines.

The oracle keeps the exact graph and answers connectivity by disjoint
sets, rebuilt from scratch after deletions; a second, search-based
implementation cross-checks it in tests. Differential runs replay one
workload through both the layered structure and the oracle, classify
every disagreement, and abort the moment the structure claims a
connection the oracle denies (that direction is impossible by design,
so it can only mean a bug).

Also here: the boosted baseline (fewer layers, each one a bundle of
independent cut structures tried in turn), and the success-probability
measurement rig for the cut-edge recovery primitive.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

from xorforest.cutset import Cutset
from xorforest.layered_connectivity import LayerStack


class SoundnessError(RuntimeError):
    """The structure returned an answer that is impossible by design."""


class WorkloadError(ValueError):
    """A workload file or op stream violates the operation contract."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


# -- exact ground truth -------------------------------------------------------


class Oracle:
    """Exact dynamic connectivity: disjoint sets, rebuilt after deletes."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("need at least one vertex")
        self.n = n
        self.edges: set[tuple[int, int]] = set()
        self._parent = list(range(n))
        self._dirty = False

    def _find(self, x: int) -> int:
        parent = self._parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def _rebuild(self) -> None:
        self._parent = list(range(self.n))
        for u, v in self.edges:
            ru, rv = self._find(u), self._find(v)
            if ru != rv:
                self._parent[ru] = rv
        self._dirty = False

    def _key(self, u: int, v: int) -> tuple[int, int]:
        if u == v or not (0 <= u < self.n and 0 <= v < self.n):
            raise WorkloadError(f"bad edge ({u}, {v}) for n={self.n}")
        return (u, v) if u < v else (v, u)

    def insert(self, u: int, v: int) -> None:
        key = self._key(u, v)
        if key in self.edges:
            raise WorkloadError(f"insert of present edge {key}")
        self.edges.add(key)
        if not self._dirty:
            ru, rv = self._find(u), self._find(v)
            if ru != rv:
                self._parent[ru] = rv

    def delete(self, u: int, v: int) -> None:
        key = self._key(u, v)
        if key not in self.edges:
            raise WorkloadError(f"delete of absent edge {key}")
        self.edges.remove(key)
        self._dirty = True

    def connected(self, u: int, v: int) -> bool:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise WorkloadError(f"bad query ({u}, {v}) for n={self.n}")
        if self._dirty:
            self._rebuild()
        return self._find(u) == self._find(v)

    def connected_bfs(self, u: int, v: int) -> bool:
        """Independent second implementation, for cross-validation."""
        if u == v:
            return True
        adj: dict[int, list[int]] = {}
        for a, b in self.edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        seen = {u}
        stack = [u]
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y == v:
                    return True
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return False

    def components(self) -> list[int]:
        """rep[v] = smallest vertex in v's component."""
        if self._dirty:
            self._rebuild()
        best: dict[int, int] = {}
        roots = [self._find(v) for v in range(self.n)]
        for v in range(self.n):
            r = roots[v]
            if r not in best or v < best[r]:
                best[r] = v
        return [best[r] for r in roots]

    def apply(self, op: tuple[str, int, int]) -> bool | None:
        kind, u, v = op
        if kind == "I":
            self.insert(u, v)
            return None
        if kind == "D":
            self.delete(u, v)
            return None
        if kind == "Q":
            return self.connected(u, v)
        raise WorkloadError(f"unknown op kind {kind!r}")


# -- workloads ----------------------------------------------------------------


@dataclass
class Workload:
    """An operation sequence valid against an initially empty graph."""

    n: int
    ops: list[tuple[str, int, int]]

    def __len__(self) -> int:
        return len(self.ops)

    def counts(self) -> dict[str, int]:
        out = {"I": 0, "D": 0, "Q": 0}
        for kind, _, _ in self.ops:
            out[kind] += 1
        return out


def generate_workload(n: int, length: int, mix: tuple[float, float, float],
                      seed: int) -> Workload:
    """Random valid workload; `mix` weighs insert/delete/query draws.

    Infeasible draws (delete with no live edges, insert into a complete
    graph) are resampled, never emitted, so the result always replays
    cleanly. Deterministic for a fixed seed.
    """
    if n < 2:
        raise ValueError("need at least two vertices")
    if length < 0:
        raise ValueError("length must be nonnegative")
    wi, wd, wq = mix
    if min(wi, wd, wq) < 0 or wi + wd + wq <= 0:
        raise ValueError("mix weights must be nonnegative, not all zero")
    rng = random.Random(seed)
    live: list[tuple[int, int]] = []
    pos: dict[tuple[int, int], int] = {}
    complete = n * (n - 1) // 2
    ops: list[tuple[str, int, int]] = []
    while len(ops) < length:
        fi = wi if len(live) < complete else 0.0
        fd = wd if live else 0.0
        feasible = fi + fd + wq
        if feasible <= 0:
            raise ValueError("no feasible operation under this mix")
        roll = rng.random() * feasible
        if roll < fi:
            while True:
                u, v = rng.randrange(n), rng.randrange(n)
                if u == v:
                    continue
                key = (u, v) if u < v else (v, u)
                if key not in pos:
                    break
            pos[key] = len(live)
            live.append(key)
            ops.append(("I", key[0], key[1]))
        elif roll < fi + fd:
            key = live[rng.randrange(len(live))]
            last = live[-1]
            live[pos[key]] = last
            pos[last] = pos[key]
            live.pop()
            del pos[key]
            ops.append(("D", key[0], key[1]))
        else:
            u, v = rng.randrange(n), rng.randrange(n)
            ops.append(("Q", u, v))
    return Workload(n=n, ops=ops)


def save_workload(workload: Workload, path: str) -> None:
    """Text format: header `<n> <op count>`, then one `I|D|Q u v` per line."""
    with open(path, "w") as fh:
        fh.write(f"{workload.n} {len(workload.ops)}\n")
        for kind, u, v in workload.ops:
            fh.write(f"{kind} {u} {v}\n")


def load_workload(path: str) -> Workload:
    """Parse and validate a workload file (see save_workload for format).

    Validation replays the edge set: inserts must be absent, deletes
    present, vertices in range. Errors carry the offending line number.
    """
    n = None
    declared = None
    ops: list[tuple[str, int, int]] = []
    live: set[tuple[int, int]] = set()
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.split()
            if n is None:
                if len(parts) != 2:
                    raise WorkloadError("header must be `<n> <op count>`", lineno)
                try:
                    n, declared = int(parts[0]), int(parts[1])
                except ValueError:
                    raise WorkloadError("header fields must be integers", lineno)
                if n < 2 or declared < 0:
                    raise WorkloadError("header out of range", lineno)
                continue
            if len(parts) != 3 or parts[0] not in ("I", "D", "Q"):
                raise WorkloadError(f"expected `I|D|Q u v`, got {text!r}", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise WorkloadError("vertex fields must be integers", lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise WorkloadError(f"vertex out of range in {text!r}", lineno)
            kind = parts[0]
            if kind in ("I", "D"):
                if u == v:
                    raise WorkloadError("self-loops are not allowed", lineno)
                key = (u, v) if u < v else (v, u)
                if kind == "I":
                    if key in live:
                        raise WorkloadError(f"duplicate insert {key}", lineno)
                    live.add(key)
                else:
                    if key not in live:
                        raise WorkloadError(f"delete of absent edge {key}", lineno)
                    live.remove(key)
            ops.append((kind, u, v))
    if n is None:
        raise WorkloadError("empty workload file: missing header")
    if declared != len(ops):
        raise WorkloadError(
            f"header declares {declared} ops, file has {len(ops)}"
        )
    return Workload(n=n, ops=ops)


# -- run configuration and stats ------------------------------------------------

_MODES = ("layered", "boosted", "oracle", "differential")


@dataclass
class Config:
    """Run parameters shared by the harness entry points and the CLI."""

    n: int
    seed: int = 0
    c_factor: int = 4
    families: int = 3
    mode: str = "layered"
    copies: int | None = None
    check_cadence: int = 0       # full invariant audit every k ops (0 = never)
    structural_cadence: int = 0  # fast structural audit every k ops (0 = never)
    fail_on_mismatch: bool = False
    omit_timings: bool = False

    def validate(self) -> None:
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.c_factor < 1:
            raise ValueError("c_factor must be positive")
        if self.families < 1:
            raise ValueError("families must be positive")
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}")
        if self.check_cadence < 0 or self.structural_cadence < 0:
            raise ValueError("cadence must be nonnegative")
        if self.mode == "boosted":
            if self.copies is not None and self.copies < 1:
                raise ValueError("copies must be positive")
        elif self.copies is not None:
            raise ValueError("copies applies to boosted mode only")


@dataclass
class RunStats:
    """Machine-readable outcome of one replay or measurement."""

    format_version: int
    mode: str
    n: int
    seed: int
    ops: dict[str, int]
    query_mismatches: int = 0
    impossible_mismatches: int = 0
    mismatch_rate: float = 0.0
    mismatch_indices: list[int] = field(default_factory=list)
    cutset_ops: dict[str, dict[str, float]] = field(default_factory=dict)
    invariant_checks: int = 0
    structural_violations: int = 0
    invariant1_total: list[int] = field(default_factory=list)
    growth_conditional_violations: int = 0
    timings: dict[str, dict[str, float]] | None = None
    success_table: list[dict[str, float]] | None = None

    def to_dict(self) -> dict:
        from dataclasses import asdict

        return asdict(self)


def _op_summary(samples: list[int]) -> dict[str, float]:
    if not samples:
        return {"count": 0, "total": 0, "mean": 0.0, "max": 0}
    return {
        "count": len(samples),
        "total": sum(samples),
        "mean": sum(samples) / len(samples),
        "max": max(samples),
    }


def _quantiles(samples: list[float]) -> dict[str, float]:
    if not samples:
        return {"p50": 0.0, "p90": 0.0, "p99": 0.0, "max": 0.0}
    data = sorted(samples)
    last = len(data) - 1

    def q(p: float) -> float:
        return data[min(last, int(p * len(data)))]

    return {"p50": q(0.50), "p90": q(0.90), "p99": q(0.99), "max": data[last]}


# -- the boosted baseline --------------------------------------------------------


class BoostedCutset:
    """Bundle of independent cut structures acting as one layer.

    Mutations fan out to every copy; `outgoing_edge` asks each copy in
    turn until one succeeds, trading per-op work for success
    probability. All copies maintain identical forests (copy 0's is the
    canonical one exposed as `.forest`), so a tree name from `tree` is
    translated to each sibling copy by membership.
    """

    def __init__(self, n: int, copies: int, seed: int | None = None,
                 families: int = 1):
        if copies < 1:
            raise ValueError("need at least one copy")
        rng = random.Random(seed)
        self.copies = [
            Cutset(n, families=families, seed=rng.getrandbits(64))
            for _ in range(copies)
        ]
        self.codec = self.copies[0].codec
        self.forest = self.copies[0].forest

    @property
    def op_count(self) -> int:
        return sum(c.op_count for c in self.copies)

    def insert_edge(self, u: int, v: int) -> None:
        for c in self.copies:
            c.insert_edge(u, v)

    def delete_edge(self, u: int, v: int) -> None:
        for c in self.copies:
            c.delete_edge(u, v)

    def insert_tree_edge(self, u: int, v: int) -> None:
        for c in self.copies:
            c.insert_tree_edge(u, v)

    def delete_tree_edge(self, u: int, v: int) -> None:
        for c in self.copies:
            c.delete_tree_edge(u, v)

    def tree(self, v: int):
        return self.copies[0].tree(v)

    def tree_size(self, t) -> int:
        return self.copies[0].tree_size(t)

    def edge_names(self):
        return self.copies[0].edge_names()

    def cut_hint(self, t) -> bool:
        """Always True: the copies' folds are independent, so copy 0
        reading empty proves nothing about its siblings. Callers fall
        through to the full per-copy scan."""
        self.copies[0].tree_size(t)  # still reject stale tree names
        return True

    def outgoing_edge(self, t) -> tuple[int, int] | None:
        got = self.copies[0].outgoing_edge(t)
        if got is not None:
            return got
        member = self.forest.tree_member(t)
        for c in self.copies[1:]:
            got = c.outgoing_edge(c.tree(member))
            if got is not None:
                return got
        return None


def build_structure(config: Config):
    """Construct the structure a config describes (not the oracle)."""
    config.validate()
    if config.mode == "boosted":
        ell = math.ceil(math.log2(config.n))
        copies = config.copies if config.copies is not None else ell
        return LayerStack(
            config.n,
            seed=config.seed,
            num_layers=ell + 1,
            cutset_factory=lambda i, s: BoostedCutset(config.n, copies, seed=s),
        )
    return LayerStack(
        config.n,
        seed=config.seed,
        c_factor=config.c_factor,
        families=config.families,
    )


# -- replay engines ---------------------------------------------------------------


def _finalize(stats: RunStats, samples: dict, times: dict, config: Config) -> None:
    stats.cutset_ops = {kind: _op_summary(samples[kind]) for kind in samples}
    if not config.omit_timings:
        stats.timings = {kind: _quantiles(times[kind]) for kind in times}
    queries = stats.ops.get("Q", 0)
    if queries:
        stats.mismatch_rate = stats.query_mismatches / queries


def differential_run(workload: Workload, config: Config,
                     outputs: list[bool] | None = None) -> RunStats:
    """Replay through the structure and the oracle side by side.

    Every query is answered by both. A true-here/false-at-oracle
    disagreement raises SoundnessError immediately (that direction
    cannot happen unless the structure is broken); the opposite
    direction is tallied as a mismatch. Invariant audits run at the
    configured cadences and structural failures raise SoundnessError.
    """
    config.validate()
    if workload.n != config.n:
        raise ValueError(f"workload is for n={workload.n}, config says {config.n}")
    stack = build_structure(config)
    oracle = Oracle(config.n)
    stats = RunStats(
        format_version=1, mode=config.mode, n=config.n, seed=config.seed,
        ops=workload.counts(),
    )
    stats.invariant1_total = [0] * stack.ell
    samples = {"insert": [], "delete": [], "query": []}
    times = {"insert": [], "delete": [], "query": []}
    clock = time.perf_counter if not config.omit_timings else None
    prev_ops = stack.cutset_ops()
    for index, (kind, u, v) in enumerate(workload.ops):
        t0 = clock() if clock else 0.0
        if kind == "I":
            stack.insert(u, v)
            oracle.insert(u, v)
            bucket = "insert"
        elif kind == "D":
            stack.delete(u, v)
            oracle.delete(u, v)
            bucket = "delete"
        else:
            got = stack.query(u, v)
            want = oracle.connected(u, v)
            bucket = "query"
            if outputs is not None:
                outputs.append(got)
            if got and not want:
                stats.impossible_mismatches += 1
                raise SoundnessError(
                    f"op {index}: query({u}, {v}) claimed a connection the "
                    f"oracle denies"
                )
            if want and not got:
                stats.query_mismatches += 1
                if len(stats.mismatch_indices) < 20:
                    stats.mismatch_indices.append(index)
        if clock:
            times[bucket].append(clock() - t0)
        cur_ops = stack.cutset_ops()
        samples[bucket].append(cur_ops - prev_ops)
        prev_ops = cur_ops
        done = index + 1
        if config.structural_cadence and done % config.structural_cadence == 0:
            report = stack.check_invariants(structure_only=True)
            stats.invariant_checks += 1
            if not report.structural_ok():
                stats.structural_violations += 1
                raise SoundnessError(f"op {index}: structural invariant broken")
        if config.check_cadence and done % config.check_cadence == 0:
            report = stack.check_invariants(components=oracle.components())
            stats.invariant_checks += 1
            if not report.structural_ok():
                stats.structural_violations += 1
                raise SoundnessError(f"op {index}: structural invariant broken")
            for i, cnt in enumerate(report.invariant1_violations):
                stats.invariant1_total[i] += cnt
            if all(c == 0 for c in report.invariant1_violations):
                clean_growth = (
                    report.top_partition_exact
                    and all(c == 0 for c in report.undersized_nonmaximal)
                )
                if not clean_growth:
                    stats.growth_conditional_violations += 1
    _finalize(stats, samples, times, config)
    return stats


def replay(workload: Workload, config: Config,
           outputs: list[bool] | None = None) -> RunStats:
    """Replay through one structure only (mode layered/boosted/oracle).

    Differential mode delegates to differential_run.
    """
    config.validate()
    if config.mode == "differential":
        return differential_run(workload, config, outputs)
    if workload.n != config.n:
        raise ValueError(f"workload is for n={workload.n}, config says {config.n}")
    stats = RunStats(
        format_version=1, mode=config.mode, n=config.n, seed=config.seed,
        ops=workload.counts(),
    )
    samples = {"insert": [], "delete": [], "query": []}
    times = {"insert": [], "delete": [], "query": []}
    clock = time.perf_counter if not config.omit_timings else None
    if config.mode == "oracle":
        oracle = Oracle(config.n)
        for kind, u, v in workload.ops:
            t0 = clock() if clock else 0.0
            if kind == "I":
                oracle.insert(u, v)
                bucket = "insert"
            elif kind == "D":
                oracle.delete(u, v)
                bucket = "delete"
            else:
                got = oracle.connected(u, v)
                bucket = "query"
                if outputs is not None:
                    outputs.append(got)
            if clock:
                times[bucket].append(clock() - t0)
            samples[bucket].append(0)
        _finalize(stats, samples, times, config)
        return stats
    stack = build_structure(config)
    stats.invariant1_total = [0] * stack.ell
    prev_ops = stack.cutset_ops()
    for index, (kind, u, v) in enumerate(workload.ops):
        t0 = clock() if clock else 0.0
        if kind == "I":
            stack.insert(u, v)
            bucket = "insert"
        elif kind == "D":
            stack.delete(u, v)
            bucket = "delete"
        else:
            got = stack.query(u, v)
            bucket = "query"
            if outputs is not None:
                outputs.append(got)
        if clock:
            times[bucket].append(clock() - t0)
        cur_ops = stack.cutset_ops()
        samples[bucket].append(cur_ops - prev_ops)
        prev_ops = cur_ops
        done = index + 1
        if config.structural_cadence and done % config.structural_cadence == 0:
            stats.invariant_checks += 1
            if not stack.check_invariants(structure_only=True).structural_ok():
                stats.structural_violations += 1
                raise SoundnessError(f"op {index}: structural invariant broken")
        if config.check_cadence and done % config.check_cadence == 0:
            report = stack.check_invariants()
            stats.invariant_checks += 1
            if not report.structural_ok():
                stats.structural_violations += 1
                raise SoundnessError(f"op {index}: structural invariant broken")
            for i, cnt in enumerate(report.invariant1_violations):
                stats.invariant1_total[i] += cnt
    _finalize(stats, samples, times, config)
    return stats


def boosted_baseline(workload: Workload, copies: int, seed: int = 0,
                     check_cadence: int = 0,
                     omit_timings: bool = False) -> RunStats:
    """Differential run of the boosted (many copies, few layers) setup."""
    config = Config(
        n=workload.n, seed=seed, mode="boosted", copies=copies,
        check_cadence=check_cadence, omit_timings=omit_timings,
    )
    return differential_run(workload, config)


# -- success-probability measurement ----------------------------------------------


def _wilson_lower_99(hits: int, trials: int) -> float:
    """One-sided 99% lower confidence bound for a binomial proportion."""
    if trials == 0:
        return 0.0
    z = 2.3263478740408408
    p = hits / trials
    z2 = z * z
    center = p + z2 / (2 * trials)
    spread = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials))
    return max(0.0, (center - spread) / (1 + z2 / trials))


def measure_success_rate(n: int, cut_sizes: list[int], trials: int, seed: int,
                         families: int = 3) -> list[dict[str, float]]:
    """Empirical `outgoing_edge` hit rates over exactly-sized cuts.

    For each requested cut size s: two star clusters on n/2 vertices
    each, joined by exactly s cross edges; one cluster is built as a
    forest tree and queried `trials` times, re-randomizing the cross
    edges' sampling depths between trials (in-cluster edges cancel out
    of every tree fold, so their depths cannot influence the outcome).
    Every hit is validated against the enumerated cut; a hit outside it
    raises SoundnessError. Rows carry a one-sided 99% binomial lower
    confidence bound on the rate.
    """
    if n < 4:
        raise ValueError("need at least 4 vertices for two clusters")
    half = n // 2
    rows = []
    for s in cut_sizes:
        if s > half * (n - half):
            raise ValueError(f"cut size {s} exceeds cluster capacity")
        structure = Cutset(n, families=families, seed=seed + s)
        for v in range(1, half):
            structure.insert_edge(0, v)
            structure.insert_tree_edge(0, v)
        for v in range(half + 1, n):
            structure.insert_edge(half, v)
        cross = []
        for k in range(s):
            pair = (k % half, half + (k // half) % (n - half))
            cross.append(pair)
            structure.insert_edge(*pair)
        cut = set(cross)
        hits = 0
        for _ in range(trials):
            got = structure.outgoing_edge(structure.tree(0))
            if got is not None:
                if got not in cut:
                    raise SoundnessError(
                        f"cut size {s}: returned edge {got} is not in the cut"
                    )
                hits += 1
            for pair in cross:
                structure.delete_edge(*pair)
                structure.insert_edge(*pair)
        rows.append({
            "cut_size": s,
            "trials": trials,
            "hits": hits,
            "rate": hits / trials if trials else 0.0,
            "lcb99": _wilson_lower_99(hits, trials),
        })
    return rows
