"""Exact multivariate polynomial arithmetic over the rationals.

Coefficients are stored sparsely in a dict keyed by exponent tuples (one
integer per variable); zero coefficients are never stored. All arithmetic
is Fraction-exact -- no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ReductionDiverged

Exponent = tuple[int, ...]


class DensePolynomial:
    """A polynomial in n_vars variables with exact rational coefficients."""

    __slots__ = ("n_vars", "coeffs")

    def __init__(
        self,
        n_vars: int,
        coeffs: Mapping[Exponent, Fraction | int] | None = None,
    ):
        self.n_vars = n_vars
        self.coeffs: dict[Exponent, Fraction] = {}
        if coeffs:
            for e, c in coeffs.items():
                c = Fraction(c)
                if c:
                    self.coeffs[tuple(e)] = c

    @classmethod
    def zero(cls, n_vars: int) -> "DensePolynomial":
        return cls(n_vars)

    @classmethod
    def constant(cls, n_vars: int, c: Fraction | int) -> "DensePolynomial":
        return cls(n_vars, {(0,) * n_vars: Fraction(c)})

    @classmethod
    def variable(cls, n_vars: int, i: int) -> "DensePolynomial":
        e = [0] * n_vars
        e[i] = 1
        return cls(n_vars, {tuple(e): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DensePolynomial):
            return NotImplemented
        return self.n_vars == other.n_vars and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n_vars, frozenset(self.coeffs.items())))

    def __add__(self, other: "DensePolynomial") -> "DensePolynomial":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return DensePolynomial(self.n_vars, out)

    def __neg__(self) -> "DensePolynomial":
        return DensePolynomial(self.n_vars, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "DensePolynomial") -> "DensePolynomial":
        return self + (-other)

    def scale(self, c: Fraction | int) -> "DensePolynomial":
        c = Fraction(c)
        if not c:
            return DensePolynomial.zero(self.n_vars)
        return DensePolynomial(self.n_vars, {e: c * v for e, v in self.coeffs.items()})

    def __mul__(self, other: "DensePolynomial | Fraction | int") -> "DensePolynomial":
        if not isinstance(other, DensePolynomial):
            return self.scale(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return DensePolynomial(self.n_vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "DensePolynomial":
        if k < 0:
            raise ValueError("negative power")
        out = DensePolynomial.constant(self.n_vars, 1)
        for _ in range(k):
            out = out * self
        return out

    def evaluate(self, point: Sequence[int]) -> Fraction:
        total = Fraction(0)
        for e, c in self.coeffs.items():
            term = c
            for i, d in enumerate(e):
                if d:
                    term *= Fraction(point[i]) ** d
            total += term
        return total

    def permute_variables(self, tau: Sequence[int]) -> "DensePolynomial":
        """Substitute x_i -> x_{tau(i)} in every monomial."""
        out: dict[Exponent, Fraction] = {}
        for e, c in self.coeffs.items():
            e2 = [0] * self.n_vars
            for i, d in enumerate(e):
                e2[tau[i]] = d
            out[tuple(e2)] = c
        return DensePolynomial(self.n_vars, out)

    def variables_used(self) -> set[int]:
        return {i for e in self.coeffs for i, d in enumerate(e) if d}

    def max_degree(self, i: int) -> int:
        return max((e[i] for e in self.coeffs), default=0)

    def per_variable_degree_below(self, n: int) -> bool:
        return all(d < n for e in self.coeffs for d in e)

    def __repr__(self) -> str:
        return f"DensePolynomial(n_vars={self.n_vars}, terms={len(self.coeffs)})"


def falling_factorial_coeffs(n: int) -> list[int]:
    """Coefficients (by power) of x(x-1)...(x-(n-1)); degree n, leading 1."""
    c = [1]
    for j in range(n):
        nc = [0] * (len(c) + 1)
        for d, a in enumerate(c):
            nc[d + 1] += a
            nc[d] -= j * a
        c = nc
    return c


def reduce_falling_factorial(p: DensePolynomial, n: int) -> DensePolynomial:
    """Canonical representative of p modulo the ideal {x_i^(falling n)}.

    Repeatedly rewrites x_i^n as x_i^n - x_i^(falling n) (a degree n-1
    polynomial) until every exponent is below n. Each rewrite strictly
    lowers the offending degree, so divergence signals a bug.
    """
    ff = falling_factorial_coeffs(n)
    replacement = {k: -ff[k] for k in range(n) if ff[k]}
    work = dict(p.coeffs)
    budget = 10_000 + 100 * sum(
        sum(e) for e in work
    ) * max(1, len(work))
    steps = 0
    while True:
        hot = None
        for e in work:
            hot_var = next((i for i, d in enumerate(e) if d >= n), None)
            if hot_var is not None:
                hot = (e, hot_var)
                break
        if hot is None:
            break
        steps += 1
        if steps > budget:
            raise ReductionDiverged(f"reduction exceeded {budget} rewrites")
        e, i = hot
        c = work.pop(e)
        for k, r in replacement.items():
            e2 = list(e)
            e2[i] = e[i] - n + k
            key = tuple(e2)
            s = work.get(key, Fraction(0)) + c * r
            if s:
                work[key] = s
            else:
                work.pop(key, None)
    return DensePolynomial(p.n_vars, work)
