"""Parallel fragment merging and the checks built on top of it.

Every vertex broadcasts its fragment label each phase, then vertices owning
an edge that leaves their fragment broadcast the cheapest such edge.  Since
broadcasts reach everyone, all vertices replay the identical merge history
locally; the shared mirror below holds that common knowledge once per run
instead of once per vertex.

MST runs on the edge weights with the tie-break key (w, min(u,v), max(u,v))
so the optimum is unique; the connectivity variant forces unit weights and
only reports the surviving fragment count.
"""

from ..clique import HALT, SILENT, Broadcast, NodeProgram, Program
from ..graphs import label_bits


def merge_key(u, v, w):
    """Total order making every edge weight distinct."""
    return (w, min(u, v), max(u, v))


class _DSU:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, v):
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


class _FragmentShared:
    """Merge history mirrored identically at every vertex."""

    def __init__(self, n, weighted):
        self.n = n
        self.weighted = weighted
        self.frag = list(range(n))
        self.count = n
        self.done = False
        self.spanning = None
        self.chosen = []
        self.by_vertex = None
        self._applied = 0

    def apply(self, phase_round, candidate_msgs):
        """Advance by one phase worth of delivered candidate broadcasts.

        phase_round is the odd effective round at which the candidates from
        the previous even round are visible; idempotent per round.
        """
        if self.done or phase_round <= self._applied:
            return
        self._applied = phase_round
        if phase_round == 1:
            if self.count == 1:
                self._finish(True)
            return
        cands = []
        for src, payload in candidate_msgs:
            if self.weighted:
                endpoint, w = payload
            else:
                endpoint, w = payload[0], 1
            cands.append((merge_key(src, endpoint, w), src, endpoint, w))
        if not cands:
            self._finish(self.count == 1)
            return
        best = {}
        for key, a, b, w in cands:
            fa = self.frag[a]
            cur = best.get(fa)
            if cur is None or key < cur[0]:
                best[fa] = (key, a, b, w)
        dsu = _DSU(self.n)
        new_edges = {}
        for key, a, b, w in best.values():
            dsu.union(self.frag[a], self.frag[b])
            e = (min(a, b), max(a, b))
            new_edges[e] = w
        for e, w in sorted(new_edges.items()):
            self.chosen.append((e[0], e[1], w))
        roots = {}
        labels = [0] * self.n
        for v in range(self.n):
            r = dsu.find(self.frag[v])
            if r not in roots:
                roots[r] = v  # first vertex seen = smallest, vertices scanned in order
            labels[v] = roots[r]
        self.frag = labels
        self.count = len(roots)
        if self.count == 1:
            self._finish(True)

    def _finish(self, spanning):
        self.done = True
        self.spanning = spanning
        by_vertex = {}
        for a, b, w in self.chosen:
            by_vertex.setdefault(a, []).append((a, b))
            by_vertex.setdefault(b, []).append((a, b))
        self.by_vertex = {v: tuple(sorted(es)) for v, es in by_vertex.items()}


class _FragmentNode(NodeProgram):
    """One vertex of the merging protocol.

    Odd effective rounds: fold in last phase's candidates, halt if the
    process is over, otherwise broadcast the fragment label.  Even rounds:
    broadcast the cheapest incident edge leaving the fragment, if any.
    """

    def __init__(self, shared, kind, flags=None):
        self.shared = shared
        self.kind = kind  # "mst" | "conn" | "stverify"
        self.flags = flags
        self.count_total = None

    def start(self, ctx):
        self.ctx = ctx
        self.L = label_bits(ctx.n)
        inc = ctx.incident
        if self.flags is not None:
            inc = tuple(e for e in inc if e[2] in self.flags)
        self.edges = tuple(
            (u, w if self.shared.weighted else 1) for u, w, _ in inc
        )
        self.offset = 1 if self.kind == "stverify" else 0

    def step(self, rnd, inbox):
        if self.kind == "stverify":
            if rnd == 1:
                return Broadcast((len(self.edges),), self.L)
            if rnd == 2:
                self.count_total = sum(c for _, (c,) in inbox.broadcasts)
        eff = rnd - self.offset
        if eff % 2 == 1:
            self.shared.apply(eff, inbox.broadcasts if eff > 1 else ())
            if self.shared.done:
                return HALT
            return Broadcast((self.shared.frag[self.ctx.node],), self.L)
        cand = self._own_candidate()
        if cand is None:
            return SILENT
        endpoint, w = cand
        if self.shared.weighted:
            return Broadcast((endpoint, w), self.L + max(1, w.bit_length()))
        return Broadcast((endpoint,), self.L)

    def _own_candidate(self):
        me = self.ctx.node
        frag = self.shared.frag
        mine = frag[me]
        best = None
        for u, w in self.edges:
            if frag[u] != mine:
                key = merge_key(me, u, w)
                if best is None or key < best[0]:
                    best = (key, u, w)
        if best is None:
            return None
        return best[1], best[2]

    def output(self):
        me = self.ctx.node
        if self.kind == "mst":
            edges = self.shared.by_vertex.get(me, ()) if self.shared.by_vertex else ()
            return (edges, bool(self.shared.spanning))
        if self.kind == "conn":
            return (self.shared.count, self.shared.count == 1)
        ok = self.shared.count == 1 and self.count_total == 2 * (self.ctx.n - 1)
        return (ok, self.count_total // 2, self.shared.count == 1)


def mst_program() -> Program:
    def build(n):
        shared = _FragmentShared(n, weighted=True)
        return [_FragmentNode(shared, "mst") for _ in range(n)]

    return Program("mst", build, "bcast")


def conn_program() -> Program:
    def build(n):
        shared = _FragmentShared(n, weighted=False)
        return [_FragmentNode(shared, "conn") for _ in range(n)]

    return Program("conn", build, "bcast")


def st_verify_program(candidate_edges) -> Program:
    """Verify that the flagged edge indices form a spanning tree.

    Runs the connectivity merge on the flagged subgraph while each vertex
    contributes one count broadcast (half an edge per flagged endpoint);
    the answer is YES iff connected and the count equals n-1.
    """
    flags = frozenset(candidate_edges)

    def build(n):
        shared = _FragmentShared(n, weighted=False)
        return [_FragmentNode(shared, "stverify", flags=flags) for _ in range(n)]

    return Program("stverify", build, "bcast")
