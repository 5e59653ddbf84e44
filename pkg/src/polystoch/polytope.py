"""Vertices and hull certificates for polytopes of polystochastic matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import Budget, resolve_cap
from .exact_cover import exact_covers
from .latin import LatinHypercube, h_of_p
from .linalg import nullspace, rank
from .permanent import has_positive_diagonal, iter_positive_diagonals
from .tensor import (
    ConvexCombination,
    Tensor,
    as_fraction,
    combine,
    format_fraction,
    permutation_violation,
    polystochastic_violation,
)


@dataclass(frozen=True)
class VertexReport:
    is_vertex: bool
    freedom_dim: int
    witness_direction: Tensor | None = None


@dataclass(frozen=True)
class HullCertificate:
    """``combine(terms) == scale * target`` with every term in Lambda_s.

    ``scale`` is 1 for a plain Birkhoff decomposition and n^(2-d) for the
    odd-dimension witnesses, whose targets are 1-polystochastic while the
    hull lives at line-sum n^(2-d).
    """

    target: Tensor
    s: int
    terms: ConvexCombination
    scale: Fraction = field(default=Fraction(1))

    def __post_init__(self):
        object.__setattr__(self, "scale", as_fraction(self.scale))

    def violation(self) -> str | None:
        for i, (_, t) in enumerate(self.terms.terms):
            if not t.same_shape(self.target):
                return f"term {i} has the wrong shape"
            why = permutation_violation(t, self.s)
            if why:
                return f"term {i} is not an {self.s}-permutation matrix: {why}"
        if combine(self.terms) != self.scale * self.target:
            return "weighted terms do not recombine to scale * target"
        return None

    def verify(self) -> bool:
        return self.violation() is None

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "scale": format_fraction(self.scale),
            "target": self.target.to_json(),
            "terms": [{"weight": format_fraction(w), "tensor": t.to_json()}
                      for w, t in self.terms.terms],
        }

    @classmethod
    def from_json(cls, obj: dict) -> HullCertificate:
        terms = ConvexCombination(tuple(
            (Fraction(t["weight"]), Tensor.from_json(t["tensor"])) for t in obj["terms"]))
        if "target" in obj:
            target = Tensor.from_json(obj["target"])
        else:
            target = combine(terms)
        return cls(target, int(obj["s"]), terms, Fraction(obj.get("scale", 1)))


# ---------------------------------------------------------------------------
# vertices


def _line_equations(A: Tensor, support: list[tuple[int, ...]]) -> list[list[int]]:
    col = {ix: j for j, ix in enumerate(support)}
    rows = []
    for axis in range(A.dim):
        lines: dict[tuple[int, ...], list[int]] = {}
        for ix in support:
            lines.setdefault(ix[:axis] + ix[axis + 1:], []).append(col[ix])
        for members in lines.values():
            r = [0] * len(support)
            for j in members:
                r[j] = 1
            rows.append(r)
    return rows


def is_vertex(A: Tensor) -> VertexReport:
    """Decide whether A is a vertex of Omega_1 by solving for line sums on Supp(A).

    A is a vertex iff it is the only 1-polystochastic matrix on its support,
    i.e. iff the homogeneous system "every line sum is 0" has no nonzero
    solution supported in Supp(A).
    """
    why = polystochastic_violation(A, 1)
    if why:
        raise ValueError(f"not 1-polystochastic: {why}")
    support = A.support()
    eqs = _line_equations(A, support)
    r = rank(eqs)
    freedom = len(support) - r
    if freedom == 0:
        return VertexReport(True, 0, None)
    v = nullspace(eqs, len(support))[0]
    entries = [Fraction(0)] * len(A.entries)
    for ix, x in zip(support, v):
        off = 0
        for c in ix:
            off = off * A.order + c
        entries[off] = x
    return VertexReport(False, freedom, Tensor(A.dim, A.order, entries))


def zero_segment(P1: Tensor, P2: Tensor) -> bool:
    """True iff both endpoints are vertices and the whole segment has zero permanent.

    The open segment has support Supp(P1) | Supp(P2), so one positive-diagonal
    test on the sum covers every interior point.
    """
    return (is_vertex(P1).is_vertex and is_vertex(P2).is_vertex
            and not has_positive_diagonal(P1 + P2))


# ---------------------------------------------------------------------------
# decompositions


def _perfect_matching(adj: list[list[int]], n: int) -> list[int] | None:
    """Row -> column matching via augmenting paths; rows and columns tried in order."""
    match_col = [-1] * n

    def augment(r, seen):
        for c in adj[r]:
            if c in seen:
                continue
            seen.add(c)
            if match_col[c] < 0 or augment(match_col[c], seen):
                match_col[c] = r
                return True
        return False

    for r in range(n):
        if not augment(r, set()):
            return None
    row_to_col = [0] * n
    for c, r in enumerate(match_col):
        row_to_col[r] = c
    return row_to_col


def birkhoff_decompose(A: Tensor) -> HullCertificate:
    """Greedy Birkhoff decomposition of a doubly stochastic matrix."""
    if A.dim != 2:
        raise ValueError("Birkhoff decomposition is for 2-dimensional matrices")
    why = polystochastic_violation(A, 1)
    if why:
        raise ValueError(f"not doubly stochastic: {why}")
    n = A.order
    rest = [list(A.entries[i * n:(i + 1) * n]) for i in range(n)]
    terms = []
    while any(v for row in rest for v in row):
        adj = [[j for j in range(n) if rest[i][j] > 0] for i in range(n)]
        sigma = _perfect_matching(adj, n)
        if sigma is None:  # pragma: no cover - impossible for doubly stochastic input
            raise ArithmeticError("no perfect matching in the support")
        w = min(rest[i][sigma[i]] for i in range(n))
        for i in range(n):
            rest[i][sigma[i]] -= w
        terms.append((w, Tensor.from_cells(2, n, [(i, sigma[i]) for i in range(n)])))
    return HullCertificate(A, 1, ConvexCombination(tuple(terms)))


@dataclass(frozen=True)
class TransversalCover:
    parts: tuple[Tensor, ...]
    mate: LatinHypercube


def transversal_cover(P: Tensor, cap: int | None = None) -> TransversalCover | None:
    """Split P in Lambda_1(3, n) into n disjoint members of Lambda_2(3, n), if possible.

    Each part is a transversal of the Latin square H(P); the parts are ordered
    by the column they occupy in row 0, and ``mate`` labels every cell by its
    part, giving an orthogonal mate of H(P).  Raises CapExceeded when the
    exact-cover search exceeds ``cap`` nodes (default 1e7).
    """
    if P.dim != 3:
        raise ValueError("transversal covers are defined for 3-dimensional permutation matrices")
    L = h_of_p(P)
    n = L.order
    transversals = [tuple(t) for t in iter_positive_diagonals(P)]
    items = [(i, j) for i in range(n) for j in range(n)]
    options = {k: [(c[0], c[1]) for c in t] for k, t in enumerate(transversals)}
    budget = Budget("transversal cover search", resolve_cap(cap, 10**7))
    cover = next(exact_covers(items, options, budget), None)
    if cover is None:
        return None
    chosen = sorted((transversals[k] for k in cover), key=lambda t: t[0][1])
    mate = [[0] * n for _ in range(n)]
    for label, t in enumerate(chosen):
        for i, j, _ in t:
            mate[i][j] = label
    parts = tuple(Tensor.from_cells(3, n, t) for t in chosen)
    return TransversalCover(parts, LatinHypercube.from_array(mate))


def rank_independent(Ms: Sequence[Tensor]) -> tuple[int, bool]:
    """Exact rank of the flattened tensors and whether they are linearly independent."""
    Ms = list(Ms)
    for M in Ms[1:]:
        if not M.same_shape(Ms[0]):
            raise ValueError("rank needs tensors of equal shape")
    r = rank([M.entries for M in Ms]) if Ms else 0
    return r, r == len(Ms)
