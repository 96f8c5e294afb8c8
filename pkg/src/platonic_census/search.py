"""Enumeration of Platonic tessellations of a given type.

The search starts from one solid and recursively glues an open face either
to a fresh solid or to any other open face in every admissible alignment.
Each triangulation reached is first completed along 01-edges that already
have the full order 2r (``fix_edges``) and then deduplicated through its
specialized isomorphism signature.

The parallel driver is a thread pool with a shared task queue.  A branch is
queued when some worker is idle and explored inline otherwise.  The compiled
kernels release the GIL, so workers overlap in the signature computation.
"""

import logging
import queue
import threading
import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .canonical import SpecializedIsoSig, parse_sig, serialize_sig
from .solids import SchlafliType, solid_template
from .triangulation import vertex_links

__all__ = [
    "SearchConfig",
    "SeenSet",
    "SearchReport",
    "MemoryBudgetExceeded",
    "fix_edges",
    "search",
    "enumerate_tessellations",
    "enumerate_parallel",
    "write_census",
    "read_census",
    "census_text",
    "tally",
]

log = logging.getLogger(__name__)

# rough per-entry cost of a bytes object held in a set
_ENTRY_OVERHEAD = 33 + 8 * 3


class MemoryBudgetExceeded(RuntimeError):
    """The seen-set outgrew the configured budget."""

    def __init__(self, seen_count, result_count, budget):
        super().__init__(
            f"memory budget of {budget} bytes exceeded after {seen_count} signatures "
            f"({result_count} tessellations found so far)")
        self.seen_count = seen_count
        self.result_count = result_count
        self.budget = budget


@dataclass(frozen=True)
class SearchConfig:
    schlafli: SchlafliType
    max_solids: int
    orientable: bool = True
    threads: int = 1
    memory_budget: int = None

    def __post_init__(self):
        if not isinstance(self.schlafli, SchlafliType):
            object.__setattr__(self, "schlafli", SchlafliType(*self.schlafli))
        if self.max_solids < 1:
            raise ValueError("max_solids must be positive")
        if self.threads < 1:
            raise ValueError("threads must be positive")


class SeenSet:
    """Insert-only set of signature keys with an atomic test-and-insert."""

    def __init__(self, budget=None):
        self._keys = set()
        self._lock = threading.Lock()
        self.budget = budget
        self.nbytes = 0

    def add(self, key):
        """Insert ``key``; returns False if it was already present."""
        with self._lock:
            if key in self._keys:
                return False
            self._keys.add(key)
            self.nbytes += len(key) + _ENTRY_OVERHEAD
            return True

    def over_budget(self):
        return self.budget is not None and self.nbytes > self.budget

    def __contains__(self, key):
        return key in self._keys

    def __len__(self):
        return len(self._keys)


@dataclass
class SearchReport:
    config: SearchConfig
    signatures: set
    seen_count: int
    nodes: int
    seconds: float
    rejected_nonmanifold: int = 0
    tallies: dict = field(default_factory=dict)


def fix_edges(t, p=None, r=None):
    """Close full-order open 01-edges of ``t`` in place; returns 'valid'/'invalid'."""
    p = t.schlafli.p if p is None else p
    r = t.schlafli.r if r is None else r
    orders = np.empty(t.num_simplices, dtype=np.int32)
    ok = _kernels.fix_edges(t.data, int(p), int(r), orders)
    return "valid" if ok else "invalid"


class _Engine:
    def __init__(self, config):
        self.config = config
        s = config.schlafli
        tmpl = solid_template(s.p, s.q)
        self.p, self.q, self.r = s.p, s.q, s.r
        self.block = np.full((tmpl.size, 4), -1, dtype=np.int32)
        self.block[:, :3] = tmpl.nbrs
        self.par = tmpl.tree_parent
        self.lab = tmpl.tree_label
        self.seq = np.empty((tmpl.size, tmpl.size), dtype=np.int32)
        _kernels.template_positions(self.block, self.par, self.lab, self.seq)
        self.max_simplices = config.max_solids * tmpl.size
        # signature entries lie in -1..k-1; stored shifted by one
        self.key_dtype = (np.uint8 if self.max_simplices < 2 ** 8 else
                          np.uint16 if self.max_simplices < 2 ** 16 else np.uint32)
        self.seen = SeenSet(config.memory_budget)
        self.results = {}
        self.rejected = 0
        self.nodes = 0
        self.abort = False
        self._lock = threading.Lock()

    def root(self):
        t = self.block.copy()
        orders = np.empty(len(t), dtype=np.int32)
        _kernels.fix_edges(t, self.p, self.r, orders)
        best = np.empty(len(t), dtype=np.int32)
        wit = np.empty(len(t), dtype=np.int32)
        _kernels.iso_sig_blocked(t, self.par, self.lab, self.seq, best, wit)
        return t, best, 1

    def expand(self, node):
        """Admit one fixed triangulation; return its children.

        A node is ``(t, signature, simp0)``; ``t`` has already been through
        ``fix_edges`` and is valid.  Children are produced by the compiled
        kernel, which also completes and validates them.
        """
        if self.abort:
            return []
        t, best, simp0 = node
        self.nodes += 1
        if not self.seen.add((best + 1).astype(self.key_dtype).tobytes()):
            return []
        if self.seen.over_budget():
            self.abort = True
            return []
        if simp0 < 0:
            self._record(t, best)
            return []
        k = t.shape[0]
        grow = k < self.max_simplices
        kmax = k + self.block.shape[0] if grow else k
        out_t = np.empty((k + 1, kmax, 4), dtype=np.int32)
        out_k = np.empty(k + 1, dtype=np.int32)
        out_key = np.empty((k + 1, kmax), dtype=np.int32)
        out_next = np.empty(k + 1, dtype=np.int32)
        step = 2 if self.config.orientable else 1
        n = _kernels.expand_node(t, simp0, self.block, grow, step, self.p, self.r,
                                 self.par, self.lab, self.seq, out_t, out_k, out_key, out_next)
        children = []
        for i in range(n):
            kk = out_k[i]
            children.append((out_t[i, :kk].copy(), out_key[i, :kk].copy(), int(out_next[i])))
        return children

    def _record(self, t, best):
        color = np.empty(t.shape[0], dtype=np.int32)
        orientable = _kernels.two_coloring(t, color)
        if orientable != self.config.orientable:
            return
        if not self.config.schlafli.cusped and not orientable:
            links = vertex_links(t)
            if any(lk.label == 0 and lk.kind != "sphere" for lk in links):
                with self._lock:
                    self.rejected += 1
                return
        sig = SpecializedIsoSig(self.config.schlafli, tuple(best.tolist()))
        with self._lock:
            self.results[sig.entries] = sig

    def report(self, seconds):
        if self.abort:
            raise MemoryBudgetExceeded(len(self.seen), len(self.results),
                                       self.config.memory_budget)
        sigs = set(self.results.values())
        return SearchReport(self.config, sigs, len(self.seen), self.nodes, seconds,
                            self.rejected, tally(sigs))


def _run_serial(engine):
    stack = [engine.root()]
    while stack:
        children = engine.expand(stack.pop())
        # push in reverse so the fresh-solid branch is explored first
        stack.extend(reversed(children))


def _run_pool(engine, threads):
    tasks = queue.Queue()
    cond = threading.Condition()
    state = {"idle": 0, "pending": 0, "error": None}

    def submit(t):
        with cond:
            state["pending"] += 1
        tasks.put(t)

    def explore(t):
        stack = [t]
        while stack:
            children = engine.expand(stack.pop())
            for child in reversed(children):
                # racy read: only affects load balance
                if state["idle"] > 0:
                    submit(child)
                else:
                    stack.append(child)

    def worker():
        while True:
            with cond:
                state["idle"] += 1
            item = tasks.get()
            with cond:
                state["idle"] -= 1
            if item is None:
                return
            try:
                explore(item)
            except BaseException as exc:  # surfaced after the pool drains
                engine.abort = True
                state["error"] = exc
            finally:
                with cond:
                    state["pending"] -= 1
                    if state["pending"] == 0:
                        cond.notify_all()

    workers = [threading.Thread(target=worker, daemon=True) for _ in range(threads)]
    for w in workers:
        w.start()
    submit(engine.root())
    with cond:
        while state["pending"]:
            cond.wait()
    for _ in workers:
        tasks.put(None)
    for w in workers:
        w.join()
    if state["error"] is not None:
        raise state["error"]


def search(config):
    """Run the enumeration and return a :class:`SearchReport`."""
    engine = _Engine(config)
    t0 = time.perf_counter()
    if config.threads == 1:
        _run_serial(engine)
    else:
        _run_pool(engine, config.threads)
    report = engine.report(time.perf_counter() - t0)
    log.info("{%s} max %d %s: %d tessellations, %d signatures seen, %d nodes, %.1fs",
             config.schlafli, config.max_solids,
             "orientable" if config.orientable else "non-orientable",
             len(report.signatures), report.seen_count, report.nodes, report.seconds)
    return report


def enumerate_tessellations(config):
    """Signatures of all tessellations of ``config.schlafli`` with at most
    ``config.max_solids`` solids and the requested orientability."""
    return search(config).signatures


def enumerate_parallel(config):
    """Same result as :func:`enumerate_tessellations`, using the thread pool."""
    if config.threads < 2:
        raise ValueError("enumerate_parallel needs at least 2 threads")
    return search(config).signatures


def tally(sigs):
    """Number of signatures per solid count."""
    out = {}
    for sig in sigs:
        out[sig.num_solids] = out.get(sig.num_solids, 0) + 1
    return dict(sorted(out.items()))


def census_text(sigs, schlafli, max_solids, orientable):
    lines = sorted(serialize_sig(s) for s in sigs)
    head = [
        f"# schlafli {schlafli}",
        f"# max_solids {max_solids}",
        f"# orientable {'yes' if orientable else 'no'}",
        f"# count {len(lines)}",
    ]
    return "\n".join(head + lines) + "\n"


def write_census(path, sigs, schlafli, max_solids, orientable):
    with open(path, "w") as fh:
        fh.write(census_text(sigs, schlafli, max_solids, orientable))


def read_census(path):
    """Return ``(header, signatures)`` of a census file."""
    header = {}
    sigs = []
    with open(path) as fh:
        for n, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(" ")
                header[key] = value
            elif line:
                try:
                    sigs.append(parse_sig(line))
                except ValueError as exc:
                    raise ValueError(f"{path}:{n}: {exc}") from None
    if "count" in header and int(header["count"]) != len(sigs):
        raise ValueError(f"{path}: header count {header['count']} != {len(sigs)} entries")
    return header, sigs

