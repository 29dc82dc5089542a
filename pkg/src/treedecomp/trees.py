"""Functional trees: contractive self-maps of Z_n with a unique fixed point.

A rooted tree on n vertices is stored as its parent map g, where g(root) =
root (the loop edge) and every other vertex points one step toward the root.
Equivalently, the (n-1)-fold composition of g maps every vertex to the root.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Sequence

import networkx as nx

from . import perms
from .errors import (
    MalformedInput,
    NotAFunctionalTree,
    PreconditionViolated,
    ResourceLimit,
)

DEFAULT_ENUMERATION_CAP = 18


@dataclass(frozen=True)
class FunctionalTree:
    """A validated parent map on Z_n. Immutable; build via from_parent_map."""

    n: int
    g: tuple[int, ...]
    root: int
    depth: tuple[int, ...]

    def sign(self, v: int) -> int:
        """(-1)**depth[v]: +1 on the root-side partition, -1 on the other."""
        return 1 if self.depth[v] % 2 == 0 else -1

    def is_leaf(self, v: int) -> bool:
        """True iff v has no preimage under g (the root never qualifies)."""
        return all(self.g[u] != v for u in range(self.n))

    def is_constant(self) -> bool:
        """True iff g maps everything to the root (a rooted star)."""
        return all(gv == self.root for gv in self.g)

    def adjacency(self) -> list[list[int]]:
        """Undirected adjacency lists of the underlying simple tree."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for v in range(self.n):
            if v != self.root:
                adj[v].append(self.g[v])
                adj[self.g[v]].append(v)
        for row in adj:
            row.sort()
        return adj

    def undirected_edges(self) -> frozenset[tuple[int, int]]:
        """The n-1 non-loop edges as sorted pairs."""
        return frozenset(
            (min(v, self.g[v]), max(v, self.g[v]))
            for v in range(self.n)
            if v != self.root
        )


def from_parent_map(n: int, g: Sequence[int]) -> FunctionalTree:
    """Validate a parent map and compute its root and depth arrays."""
    if n < 1:
        raise MalformedInput(f"vertex count must be positive, got {n}")
    g = tuple(g)
    if len(g) != n:
        raise MalformedInput(f"parent map has length {len(g)}, expected {n}")
    if any(not (0 <= gv < n) for gv in g):
        raise MalformedInput(f"parent map entries must lie in Z_{n}: {list(g)}")

    image = set(range(n))
    for _ in range(n - 1):
        image = {g[v] for v in image}
    if len(image) != 1:
        raise NotAFunctionalTree(
            f"(n-1)-fold image is {sorted(image)}, expected a single fixed point"
        )
    root = image.pop()

    children: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        if v != root:
            children[g[v]].append(v)
    depth = [0] * n
    queue = [root]
    while queue:
        nxt: list[int] = []
        for v in queue:
            for c in children[v]:
                depth[c] = depth[v] + 1
                nxt.append(c)
        queue = nxt
    return FunctionalTree(n=n, g=g, root=root, depth=tuple(depth))


def reroot(t: FunctionalTree, r: int) -> FunctionalTree:
    """Same underlying tree, re-oriented so that g(r) = r."""
    if not (0 <= r < t.n):
        raise MalformedInput(f"root {r} not in Z_{t.n}")
    if r == t.root:
        return t
    adj = t.adjacency()
    g = [0] * t.n
    g[r] = r
    seen = [False] * t.n
    seen[r] = True
    queue = [r]
    while queue:
        nxt: list[int] = []
        for v in queue:
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    g[u] = v
                    nxt.append(u)
        queue = nxt
    return from_parent_map(t.n, g)


def conjugate(t: FunctionalTree, sigma: Sequence[int]) -> FunctionalTree:
    """Functional tree of h = sigma . g . sigma^{-1} (a vertex relabeling)."""
    sigma = perms.check_perm(sigma, t.n)
    h = [0] * t.n
    for v in range(t.n):
        h[sigma[v]] = sigma[t.g[v]]
    return from_parent_map(t.n, h)


def square(t: FunctionalTree) -> FunctionalTree:
    """Functional tree of g . g (every vertex hops to its grandparent)."""
    return from_parent_map(t.n, [t.g[t.g[v]] for v in range(t.n)])


def leaves(t: FunctionalTree) -> list[int]:
    return [v for v in range(t.n) if t.is_leaf(v)]


def sibling_leaf_pairs(t: FunctionalTree) -> list[tuple[int, int]]:
    """All pairs of leaves sharing a parent, as (smaller, larger)."""
    lf = leaves(t)
    return [
        (a, b)
        for i, a in enumerate(lf)
        for b in lf[i + 1 :]
        if t.g[a] == t.g[b]
    ]


def collapse_leaf_siblings(t: FunctionalTree) -> FunctionalTree:
    """Reattach vertex n-1 and its whole sibling class to the grandparent.

    Requires n-1 to be a leaf at even depth; use normalize_for_collapse to
    establish that. The sibling class is the full preimage of g(n-1).
    """
    last = t.n - 1
    if not t.is_leaf(last):
        raise PreconditionViolated(f"vertex {last} is not a leaf")
    if t.depth[last] % 2 != 0:
        raise PreconditionViolated(
            f"vertex {last} has odd depth {t.depth[last]}"
        )
    parent = t.g[last]
    grand = t.g[parent]
    g = [grand if t.g[v] == parent else t.g[v] for v in range(t.n)]
    return from_parent_map(t.n, g)


def normalize_for_collapse(t: FunctionalTree) -> FunctionalTree:
    """Reroot/relabel so vertex n-1 is a leaf at even depth.

    Identity when the tree already qualifies. When some leaf already sits at
    even depth, only labels are swapped. Only when every leaf has odd depth
    is the tree rerooted: at the smallest internal vertex at even distance
    from the smallest degree-1 vertex (a degree-1 fallback covers stars).
    Preferring the swap, and an internal reroot target, keeps the repeated
    normalize-collapse iteration strictly shrinking, so it reaches the
    constant map within n-1 rounds.
    """
    if t.n < 3:
        raise PreconditionViolated(f"need n >= 3, got n = {t.n}")
    last = t.n - 1
    if t.is_leaf(last) and t.depth[last] % 2 == 0:
        return t

    even_leaves = [
        v for v in range(t.n) if t.is_leaf(v) and t.depth[v] % 2 == 0
    ]
    if even_leaves:
        out = conjugate(t, perms.transposition(min(even_leaves), last, t.n))
        assert out.is_leaf(last) and out.depth[last] % 2 == 0
        return out

    adj = t.adjacency()
    ell = min(v for v in range(t.n) if len(adj[v]) == 1)
    dist = [-1] * t.n
    dist[ell] = 0
    queue = [ell]
    while queue:
        nxt: list[int] = []
        for v in queue:
            for u in adj[v]:
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        queue = nxt
    even = [v for v in range(t.n) if v != ell and dist[v] % 2 == 0]
    internal = [v for v in even if len(adj[v]) >= 2]
    r = min(internal) if internal else min(even)

    out = reroot(t, r)
    if ell != last:
        out = conjugate(out, perms.transposition(ell, last, t.n))
    assert out.is_leaf(last) and out.depth[last] % 2 == 0
    return out


# ---------------------------------------------------------------------------
# Canonical codes and the isomorphism-free catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeCatalogEntry:
    tree: FunctionalTree
    canonical_code: bytes
    index: int


def _rooted_level_sequence(adj: list[list[int]], root: int) -> list[int]:
    """Canonical preorder depth sequence; children sorted descending."""

    def walk(v: int, parent: int, d: int) -> list[int]:
        subs = sorted(
            (walk(u, v, d + 1) for u in adj[v] if u != parent), reverse=True
        )
        out = [d]
        for s in subs:
            out.extend(s)
        return out

    return walk(root, -1, 0)


def _centroids(adj: list[list[int]]) -> list[int]:
    """The one or two vertices minimizing the largest split component."""
    n = len(adj)
    if n == 1:
        return [0]
    size = [1] * n
    order: list[int] = []
    parent = [-1] * n
    stack = [0]
    seen = [False] * n
    seen[0] = True
    while stack:
        v = stack.pop()
        order.append(v)
        for u in adj[v]:
            if not seen[u]:
                seen[u] = True
                parent[u] = v
                stack.append(u)
    for v in reversed(order):
        if parent[v] >= 0:
            size[parent[v]] += size[v]
    best = n
    cents: list[int] = []
    for v in range(n):
        comp = n - size[v]
        for u in adj[v]:
            if u != parent[v]:
                comp = max(comp, size[u])
        if comp < best:
            best, cents = comp, [v]
        elif comp == best:
            cents.append(v)
    return sorted(cents)


def canonical_code(t: FunctionalTree) -> bytes:
    """Isomorphism-complete code: centroid-rooted canonical level sequence.

    For bicentroidal trees, the lexicographically smaller of the two rootings.
    """
    adj = t.adjacency()
    return min(bytes(_rooted_level_sequence(adj, c)) for c in _centroids(adj))


def canonical_code_of_edges(n: int, edges: Sequence[tuple[int, int]]) -> bytes:
    """Canonical code of an arbitrary tree given as an undirected edge list."""
    if len(edges) != n - 1:
        raise MalformedInput(f"{len(edges)} edges cannot form a tree on {n} vertices")
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    cents = _centroids(adj)
    return min(bytes(_rooted_level_sequence(adj, c)) for c in cents)


def tree_from_level_sequence(seq: Sequence[int]) -> FunctionalTree:
    """Decode a preorder depth sequence into a parent map (vertex 0 = root)."""
    n = len(seq)
    if n == 0 or seq[0] != 0:
        raise MalformedInput(f"not a level sequence: {list(seq)}")
    g = [0] * n
    stack = [0]  # stack[d] = most recent vertex at depth d
    for v in range(1, n):
        d = seq[v]
        if not (1 <= d <= len(stack)):
            raise MalformedInput(f"not a level sequence: {list(seq)}")
        del stack[d:]
        g[v] = stack[d - 1]
        stack.append(v)
    return from_parent_map(n, g)


def enumerate_free_trees(
    n: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[TreeCatalogEntry]:
    """One functional tree per isomorphism class of free trees on n vertices.

    Each tree is rooted at its canonical centroid with vertices numbered in
    canonical preorder, so the parent map itself is a normal form. Entries
    are yielded in increasing canonical-code order.
    """
    if n < 1:
        raise MalformedInput(f"vertex count must be positive, got {n}")
    if n > cap:
        raise ResourceLimit(f"n = {n} exceeds the enumeration cap {cap}")
    if n == 1:
        codes = [bytes([0])]
    elif n == 2:
        codes = [bytes([0, 1])]
    else:
        codes = []
        for graph in nx.nonisomorphic_trees(n):
            adj: list[list[int]] = [sorted(graph.neighbors(v)) for v in range(n)]
            cents = _centroids(adj)
            codes.append(min(bytes(_rooted_level_sequence(adj, c)) for c in cents))
        codes.sort()
        assert len(set(codes)) == len(codes), "duplicate isomorphism class"
    for index, code in enumerate(codes):
        yield TreeCatalogEntry(
            tree=tree_from_level_sequence(code), canonical_code=code, index=index
        )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def tree_to_json(t: FunctionalTree) -> str:
    return json.dumps({"n": t.n, "g": list(t.g)})


def tree_from_json(text: str) -> FunctionalTree:
    try:
        obj = json.loads(text)
        n, g = obj["n"], obj["g"]
    except (json.JSONDecodeError, TypeError, KeyError) as exc:
        raise MalformedInput(f"bad tree JSON: {exc}") from exc
    return from_parent_map(n, g)


def tree_to_dot(t: FunctionalTree) -> str:
    """DOT digraph with the loop edge rendered at the root."""
    lines = ["digraph tree {"]
    for v in range(t.n):
        lines.append(f"  {v} -> {t.g[v]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
