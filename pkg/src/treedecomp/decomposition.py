"""Cyclic decompositions of directed K_{n,n}, K_{2nx+1}, and K_{nx,nx}.

Constructions place the labeled tree by modular shifts; verify_partition is
the independent ground truth (exact cover of the host edge set plus a
per-copy shape check), and every constructor runs it before returning.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from . import trees
from .errors import MalformedInput, VerificationFailed
from .labeling import Labeling, verify_beta


@dataclass(frozen=True)
class OrientedBipartiteTree:
    """Left-to-right orientation: left endpoints in Z_n, right in n..2n-1."""

    n: int
    edges: tuple[tuple[int, int], ...]
    root_edge: tuple[int, int]


def orient(t: trees.FunctionalTree) -> OrientedBipartiteTree:
    """The unique left-to-right orientation of a functional tree.

    An even-depth vertex v contributes (v, n+g(v)); an odd-depth vertex
    contributes (g(v), n+v); the root contributes the loop-derived edge
    (r, n+r). Even-depth vertices therefore appear only on the left.
    """
    n = t.n
    edges = []
    for v in range(n):
        if v == t.root:
            edges.append((v, n + v))
        elif t.sign(v) > 0:
            edges.append((v, n + t.g[v]))
        else:
            edges.append((t.g[v], n + v))
    return OrientedBipartiteTree(
        n=n, edges=tuple(sorted(edges)), root_edge=(t.root, n + t.root)
    )


def unorient(o: OrientedBipartiteTree) -> trees.FunctionalTree:
    """Recover the parent map from an orientation (inverse of orient)."""
    n = o.n
    root = o.root_edge[0]
    adj: list[list[int]] = [[] for _ in range(n)]
    for x, y in o.edges:
        if (x, y) == o.root_edge:
            continue
        adj[x].append(y - n)
        adj[y - n].append(x)
    g = [0] * n
    g[root] = root
    seen = [False] * n
    seen[root] = True
    queue = [root]
    while queue:
        nxt = []
        for v in queue:
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    g[u] = v
                    nxt.append(u)
        queue = nxt
    return trees.from_parent_map(n, g)


@dataclass(frozen=True)
class Host:
    """Host graph descriptor. kind: knn (directed), k2n1, or knxnx."""

    kind: str
    n: int
    x: int


@dataclass(frozen=True)
class Decomposition:
    host: Host
    copies: tuple[tuple[tuple[int, int], ...], ...]
    tree: trees.FunctionalTree
    sigma: tuple[int, ...]
    shifts: tuple[tuple[int, int], ...]


def host_edges(host: Host) -> set[tuple[int, int]]:
    """The full edge set of the host graph."""
    if host.kind == "knn":
        n = host.n
        return {(x, n + y) for x in range(n) for y in range(n)}
    if host.kind == "k2n1":
        m = 2 * host.n * host.x + 1
        return {(u, v) for u in range(m) for v in range(u + 1, m)}
    if host.kind == "knxnx":
        side = host.n * host.x
        return {(l, side + r) for l in range(side) for r in range(side)}
    raise MalformedInput(f"unknown host kind {host.kind!r}")


def _as_labeling(t: trees.FunctionalTree, lab: Labeling | Sequence[int]) -> Labeling:
    sigma = lab.sigma if isinstance(lab, Labeling) else lab
    result = verify_beta(t, sigma)
    if not isinstance(result, Labeling):
        raise MalformedInput(f"sigma {list(sigma)} is not a beta-labeling of the tree")
    return result


def _bipartite_tree_edges(labeled: trees.FunctionalTree) -> list[tuple[int, int]]:
    """Non-loop edges of the labeled tree as (even-depth label, odd-depth label)."""
    pairs = []
    for v in range(labeled.n):
        if v == labeled.root:
            continue
        p = labeled.g[v]
        pairs.append((v, p) if labeled.depth[v] % 2 == 0 else (p, v))
    return sorted(pairs)


def decompose_directed_knn(
    t: trees.FunctionalTree, lab: Labeling | Sequence[int]
) -> Decomposition:
    """n diagonal shifts of the labeled orientation tile directed K_{n,n}.

    Copy i sends (x, n+y) to ((x+i) mod n, n + (y-n+i) mod n); the frames of
    one full rotation cover Z_n x {n..2n-1} exactly once.
    """
    lab = _as_labeling(t, lab)
    n = t.n
    oriented = orient(trees.conjugate(t, lab.sigma))
    copies = []
    for i in range(n):
        copies.append(
            tuple(
                sorted(
                    ((x + i) % n, n + (y - n + i) % n) for x, y in oriented.edges
                )
            )
        )
    d = Decomposition(
        host=Host("knn", n, 1),
        copies=tuple(copies),
        tree=t,
        sigma=lab.sigma,
        shifts=tuple((0, i) for i in range(n)),
    )
    report = verify_partition(d)
    if not report.ok:
        raise VerificationFailed(report.problem)
    return d


def decompose_k2n1(
    t: trees.FunctionalTree, lab: Labeling | Sequence[int], x: int
) -> Decomposition:
    """A tree with n edges tiles K_{2nx+1} by x label stretches and rotation.

    Copy (k, i) places an even-partition label a at a+i and an odd-partition
    label b at b+kn+i, mod 2nx+1. The stretch k spreads the edge differences
    over 1..nx, and the rotation i walks each difference class around Z_m.
    """
    if t.n < 2:
        raise MalformedInput("tree must have at least one edge")
    if x < 1:
        raise MalformedInput(f"x must be positive, got {x}")
    lab = _as_labeling(t, lab)
    n_edges = t.n - 1
    m = 2 * n_edges * x + 1
    pairs = _bipartite_tree_edges(trees.conjugate(t, lab.sigma))
    copies = []
    shifts = []
    for k in range(x):
        for i in range(m):
            copy = []
            for a, b in pairs:
                u = (a + i) % m
                v = (b + k * n_edges + i) % m
                copy.append((min(u, v), max(u, v)))
            copies.append(tuple(sorted(copy)))
            shifts.append((k, i))
    d = Decomposition(
        host=Host("k2n1", n_edges, x),
        copies=tuple(copies),
        tree=t,
        sigma=lab.sigma,
        shifts=tuple(shifts),
    )
    report = verify_partition(d)
    if not report.ok:
        raise VerificationFailed(report.problem)
    return d


def decompose_knxnx(
    t: trees.FunctionalTree, lab: Labeling | Sequence[int], x: int
) -> Decomposition:
    """A tree with n edges tiles undirected K_{nx,nx} (parts of size nx).

    Copy (k, s) places an even-partition label a on the left at a+s and an
    odd-partition label b on the right at b+kn+s, mod nx.
    """
    if t.n < 2:
        raise MalformedInput("tree must have at least one edge")
    if x < 1:
        raise MalformedInput(f"x must be positive, got {x}")
    lab = _as_labeling(t, lab)
    n_edges = t.n - 1
    side = n_edges * x
    pairs = _bipartite_tree_edges(trees.conjugate(t, lab.sigma))
    copies = []
    shifts = []
    for k in range(x):
        for s in range(side):
            copies.append(
                tuple(
                    sorted(
                        ((a + s) % side, side + (b + k * n_edges + s) % side)
                        for a, b in pairs
                    )
                )
            )
            shifts.append((k, s))
    d = Decomposition(
        host=Host("knxnx", n_edges, x),
        copies=tuple(copies),
        tree=t,
        sigma=lab.sigma,
        shifts=tuple(shifts),
    )
    report = verify_partition(d)
    if not report.ok:
        raise VerificationFailed(report.problem)
    return d


@dataclass(frozen=True)
class PartitionReport:
    ok: bool
    problem: str | None
    witness: tuple | None
    copies: int


def _copy_is_tree_of_shape(
    copy: Sequence[tuple[int, int]], expected_code: bytes
) -> str | None:
    """None if the copy is a vertex-injective tree with the expected shape."""
    verts = sorted({v for e in copy for v in e})
    if len(verts) != len(copy) + 1:
        return f"copy is not vertex-injective: {len(verts)} vertices, {len(copy)} edges"
    index = {v: i for i, v in enumerate(verts)}
    relabeled = [(index[a], index[b]) for a, b in copy]
    adj: list[list[int]] = [[] for _ in verts]
    for a, b in relabeled:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * len(verts)
    seen[0] = True
    queue = [0]
    while queue:
        v = queue.pop()
        for u in adj[v]:
            if not seen[u]:
                seen[u] = True
                queue.append(u)
    if not all(seen):
        return "copy is disconnected"
    code = trees.canonical_code_of_edges(len(verts), relabeled)
    if code != expected_code:
        return "copy shape differs from the source tree"
    return None


def verify_partition(d: Decomposition) -> PartitionReport:
    """Exact cover of the host edge set by copies of the source shape."""
    if d.host.kind == "knn":
        # Copies carry the loop-derived edge, so the reference shape is the
        # oriented bipartite tree (the source tree plus a pendant at the root).
        oriented = orient(trees.conjugate(d.tree, d.sigma))
        verts = sorted({v for e in oriented.edges for v in e})
        index = {v: i for i, v in enumerate(verts)}
        expected_code = trees.canonical_code_of_edges(
            len(verts), [(index[a], index[b]) for a, b in oriented.edges]
        )
    else:
        expected_code = trees.canonical_code(d.tree)

    seen: set[tuple[int, int]] = set()
    for idx, copy in enumerate(d.copies):
        shape_problem = _copy_is_tree_of_shape(copy, expected_code)
        if shape_problem is not None:
            return PartitionReport(False, shape_problem, (idx,), len(d.copies))
        for edge in copy:
            if edge in seen:
                return PartitionReport(
                    False, "edge covered twice", (idx, edge), len(d.copies)
                )
            seen.add(edge)

    expected_edges = host_edges(d.host)
    if seen != expected_edges:
        missing = sorted(expected_edges - seen)
        extra = sorted(seen - expected_edges)
        witness = (missing[:3], extra[:3])
        return PartitionReport(
            False, "copies do not tile the host edge set", witness, len(d.copies)
        )
    return PartitionReport(True, None, None, len(d.copies))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def decomposition_to_json(d: Decomposition) -> str:
    return json.dumps(
        {
            "host": {"kind": d.host.kind, "n": d.host.n, "x": d.host.x},
            "copies": [[[a, b] for a, b in copy] for copy in d.copies],
            "provenance": {
                "tree": {"n": d.tree.n, "g": list(d.tree.g)},
                "sigma": list(d.sigma),
                "shifts": [[k, i] for k, i in d.shifts],
            },
        }
    )


def decomposition_from_json(text: str) -> Decomposition:
    try:
        obj = json.loads(text)
        host = Host(obj["host"]["kind"], obj["host"]["n"], obj["host"]["x"])
        copies = tuple(
            tuple((a, b) for a, b in copy) for copy in obj["copies"]
        )
        prov = obj["provenance"]
        tree = trees.from_parent_map(prov["tree"]["n"], prov["tree"]["g"])
        sigma = tuple(prov["sigma"])
        shifts = tuple((k, i) for k, i in prov["shifts"])
    except (json.JSONDecodeError, TypeError, KeyError) as exc:
        raise MalformedInput(f"bad decomposition JSON: {exc}") from exc
    return Decomposition(host=host, copies=copies, tree=tree, sigma=sigma, shifts=shifts)


def decomposition_to_dot(d: Decomposition) -> str:
    """One frame per copy; edges of earlier copies are grayed out."""
    directed = d.host.kind == "knn"
    kind, arrow = ("digraph", "->") if directed else ("graph", "--")
    frames = []
    previous: list[tuple[int, int]] = []
    for idx, copy in enumerate(d.copies):
        lines = [f"{kind} frame_{idx} {{"]
        for a, b in previous:
            lines.append(f'  {a} {arrow} {b} [color=lightgray];')
        for a, b in copy:
            lines.append(f"  {a} {arrow} {b};")
        lines.append("}")
        frames.append("\n".join(lines))
        previous.extend(copy)
    return "\n".join(frames) + "\n"
