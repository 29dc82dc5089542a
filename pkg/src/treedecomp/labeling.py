"""Search for and verify oriented beta-labelings, graceful and rho labelings.

A relabeling sigma of a functional tree g induces h = sigma.g.sigma^{-1} and
one signed edge label per vertex,

    signed[w] = (-1)**depth_h(w) * (h(w) - w),

with the root contributing 0 through its loop. The labeling is accepted when
the signed labels hit every element of Z_n exactly once.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import perms, trees
from .errors import MalformedInput, ResourceLimit

DEFAULT_SEARCH_CAP = 16
DEFAULT_PHI_CAP = 9


@dataclass(frozen=True)
class Labeling:
    """A verified beta-labeling: built by verify_beta/find_beta only."""

    sigma: tuple[int, ...]
    h: tuple[int, ...]
    signed_labels: tuple[int, ...]

    @property
    def gamma(self) -> tuple[int, ...]:
        """The induced bijection v -> signed label at v (a permutation)."""
        return self.signed_labels


@dataclass(frozen=True)
class BetaFailure:
    """Why a candidate permutation is not a beta-labeling.

    offending pairs (vertex, signed label) name every relabeled vertex whose
    label falls outside Z_n or collides with another vertex's.
    """

    sigma: tuple[int, ...]
    signed_labels: tuple[int, ...]
    duplicated: tuple[int, ...]
    out_of_range: tuple[int, ...]
    offending: tuple[tuple[int, int], ...]


def _signed_labels(t: trees.FunctionalTree, sigma: Sequence[int]) -> list[int]:
    """signed[sigma(v)] = (-1)**depth(v) * (sigma(g(v)) - sigma(v))."""
    out = [0] * t.n
    for v in range(t.n):
        out[sigma[v]] = t.sign(v) * (sigma[t.g[v]] - sigma[v])
    return out


def verify_beta(
    t: trees.FunctionalTree, sigma: Sequence[int]
) -> Labeling | BetaFailure:
    """Return a Labeling when the signed labels saturate Z_n, else a report."""
    sigma = perms.check_perm(sigma, t.n)
    signed = _signed_labels(t, sigma)
    counts = [0] * t.n
    out_of_range = []
    for lbl in signed:
        if 0 <= lbl < t.n:
            counts[lbl] += 1
        else:
            out_of_range.append(lbl)
    duplicated = [lbl for lbl, c in enumerate(counts) if c > 1]
    if out_of_range or duplicated:
        offending = tuple(
            (w, lbl)
            for w, lbl in enumerate(signed)
            if not (0 <= lbl < t.n) or counts[lbl] > 1
        )
        return BetaFailure(
            sigma=sigma,
            signed_labels=tuple(signed),
            duplicated=tuple(sorted(duplicated)),
            out_of_range=tuple(sorted(out_of_range)),
            offending=offending,
        )
    h = [0] * t.n
    for v in range(t.n):
        h[sigma[v]] = sigma[t.g[v]]
    return Labeling(sigma=sigma, h=tuple(h), signed_labels=tuple(signed))


def _search_order(t: trees.FunctionalTree) -> list[int]:
    """Root-first BFS ordering, children in ascending vertex order."""
    kids: list[list[int]] = [[] for _ in range(t.n)]
    for v in range(t.n):
        if v != t.root:
            kids[t.g[v]].append(v)
    order = [t.root]
    queue = [t.root]
    while queue:
        nxt: list[int] = []
        for v in queue:
            for c in kids[v]:
                order.append(c)
                nxt.append(c)
        queue = nxt
    return order


def find_beta(
    t: trees.FunctionalTree,
    mode: str = "first",
    cap: int = DEFAULT_SEARCH_CAP,
    seed: int | None = None,
) -> Labeling | list[Labeling] | None:
    """Backtracking search over label assignments.

    Vertices are labeled root-first; a non-root vertex's label is forced by
    its parent's label and the chosen edge label (parent - e on the even
    partition, parent + e on the odd one), so pruning on used vertex labels
    and used edge labels is immediate. Edge labels are tried largest-first.

    mode="first" returns one Labeling (or None if the space is exhausted,
    which would falsify the search, not the existence theorem).
    mode="all" returns every labeling, sorted by sigma.
    """
    if mode not in ("first", "all"):
        raise MalformedInput(f"unknown mode {mode!r}")
    if t.n > cap:
        raise ResourceLimit(f"n = {t.n} exceeds the search cap {cap}")
    n = t.n
    order = _search_order(t)
    sign = [t.sign(v) for v in range(n)]
    rng = random.Random(seed) if seed is not None else None

    label = [-1] * n
    used_label = [False] * n
    used_edge = [False] * n
    used_edge[0] = True  # the root loop always carries edge label 0
    found: list[tuple[int, ...]] = []

    def extend(i: int) -> bool:
        if i == n:
            found.append(tuple(label))
            return mode == "first"
        u = order[i]
        parent_label = label[t.g[u]]
        candidates = [e for e in range(n - 1, 0, -1) if not used_edge[e]]
        if rng is not None:
            rng.shuffle(candidates)
        for e in candidates:
            lu = parent_label - e if sign[u] > 0 else parent_label + e
            if 0 <= lu < n and not used_label[lu]:
                label[u], used_label[lu], used_edge[e] = lu, True, True
                if extend(i + 1):
                    return True
                label[u], used_label[lu], used_edge[e] = -1, False, False
        return False

    root_labels = list(range(n))
    if rng is not None:
        rng.shuffle(root_labels)
    for rl in root_labels:
        label[t.root], used_label[rl] = rl, True
        if extend(1) and mode == "first":
            break
        label[t.root], used_label[rl] = -1, False

    if mode == "first":
        if not found:
            return None
        result = verify_beta(t, found[0])
        assert isinstance(result, Labeling)
        return result
    labelings = []
    for sigma in sorted(found):
        result = verify_beta(t, sigma)
        assert isinstance(result, Labeling)
        labelings.append(result)
    return labelings


def phi_set(t: trees.FunctionalTree, cap: int = DEFAULT_PHI_CAP) -> list[tuple[int, ...]]:
    """All permutations passing verify_beta, by exhaustive lexicographic scan."""
    if t.n > cap:
        raise ResourceLimit(f"n = {t.n} exceeds the exhaustive cap {cap}")
    n, g = t.n, t.g
    sign = [t.sign(v) for v in range(n)]
    out = []
    for p in itertools.permutations(range(n)):
        seen = 0
        for v in range(n):
            lbl = sign[v] * (p[g[v]] - p[v])
            if lbl < 0 or lbl >= n:
                break
            bit = 1 << lbl
            if seen & bit:
                break
            seen |= bit
        else:
            out.append(p)
    return out


@dataclass(frozen=True)
class GracefulReport:
    ok: bool
    abs_labels: tuple[int, ...]
    duplicated: tuple[int, ...]


def verify_graceful(t: trees.FunctionalTree, sigma: Sequence[int]) -> GracefulReport:
    """True iff the absolute differences |h(v) - v| saturate Z_n."""
    sigma = perms.check_perm(sigma, t.n)
    labels = sorted(abs(sigma[t.g[v]] - sigma[v]) for v in range(t.n))
    duplicated = sorted({a for a, b in zip(labels, labels[1:]) if a == b})
    return GracefulReport(
        ok=not duplicated, abs_labels=tuple(labels), duplicated=tuple(duplicated)
    )


@dataclass(frozen=True)
class RhoReport:
    ok: bool
    wrapped_labels: tuple[int, ...]
    duplicated: tuple[int, ...]


def verify_rho(
    edge_list: Sequence[tuple[int, int]],
    labels: Mapping[int, int] | Sequence[int],
) -> RhoReport:
    """True iff the wrapped edge labels min(d, 2n+1-d) are pairwise distinct."""
    n = len(edge_list)
    if n == 0:
        raise MalformedInput("empty edge list")
    values = dict(enumerate(labels)) if not isinstance(labels, Mapping) else dict(labels)
    endpoints = {v for e in edge_list for v in e}
    missing = endpoints - values.keys()
    if missing:
        raise MalformedInput(f"unlabeled endpoints: {sorted(missing)}")
    used = [values[v] for v in endpoints]
    if len(set(used)) != len(used):
        raise MalformedInput("vertex labels are not injective")
    if any(not (0 <= values[v] <= 2 * n) for v in endpoints):
        raise MalformedInput(f"labels must lie in 0..{2 * n}")
    wrapped = []
    for x, y in edge_list:
        d = abs(values[x] - values[y])
        wrapped.append(min(d, 2 * n + 1 - d))
    wrapped.sort()
    duplicated = sorted({a for a, b in zip(wrapped, wrapped[1:]) if a == b})
    return RhoReport(
        ok=not duplicated, wrapped_labels=tuple(wrapped), duplicated=tuple(duplicated)
    )
