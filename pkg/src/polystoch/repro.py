"""Named reproduction checks, one per acceptance criterion.

Each check returns a :class:`CheckResult` whose ``values`` hold the exact
numbers it compared, so a failure shows what was computed.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .constructions import (
    ZeroFamilySpec,
    a6,
    a6_terms,
    hull_witness,
    independent_zero_set,
    mols_pair,
    perturbation_scan,
    uniform_permanent,
    zero_family,
)
from .latin import (
    LatinHypercube,
    all_latin_hypercubes,
    completions,
    cyclic,
    interchange_hyperplanes,
    is_orthogonal,
    linear_hypercube,
    p_of_h,
    random_latin_hypercube,
)
from .oracles import naive_permanent, pair_permanent_int, transversals_by_column_permutation
from .permanent import (
    Diagonal,
    count_transversals,
    delta_sum_check,
    iter_positive_diagonals,
    mixed_transversal_exists,
    permanent1,
)
from .polytope import rank_independent, transversal_cover, zero_segment
from .tensor import (
    ConvexCombination,
    Tensor,
    average,
    combine,
    is_permutation_matrix,
    is_polystochastic,
    linear_combination,
    planes_scaled,
    product,
    uniform,
)


@dataclass
class CheckResult:
    claim: str
    passed: bool
    summary: str
    values: dict = field(default_factory=dict)
    seconds: float = 0.0


@dataclass(frozen=True)
class Check:
    claim: str
    criterion: int
    title: str
    budget_seconds: float
    run: Callable[[int | None], CheckResult]


REGISTRY: dict[str, Check] = {}


def _register(claim: str, criterion: int, title: str, budget: float):
    def wrap(fn):
        REGISTRY[claim] = Check(claim, criterion, title, budget, fn)
        return fn
    return wrap


def run_check(claim: str, workers: int | None = None) -> CheckResult:
    if claim not in REGISTRY:
        raise KeyError(f"unknown claim id {claim!r}; known: {', '.join(REGISTRY)}")
    t0 = time.perf_counter()
    res = REGISTRY[claim].run(workers)
    res.seconds = time.perf_counter() - t0
    return res


def _fmt(x) -> str:
    return str(x) if not isinstance(x, Fraction) or x.denominator != 1 else str(x.numerator)


# ---------------------------------------------------------------------------


@_register("cyclic-transversals", 1, "transversal counts of cyclic squares", 10)
def _cyclic_transversals(workers):
    expected_odd = {3: 3, 5: 15, 7: 133}
    counts = {n: count_transversals(cyclic(2, n))[0] for n in range(3, 9)}
    oracle = {n: pair_permanent_int(np.asarray(p_of_h(cyclic(2, n)).array, dtype=np.int64))
              for n in expected_odd}
    ok = all(counts[n] == 0 for n in (4, 6, 8))
    ok &= all(counts[n] == oracle[n] == expected_odd[n] for n in expected_odd)
    return CheckResult("cyclic-transversals", ok,
                       " ".join(f"n={n}:{c}" for n, c in counts.items()),
                       {"counts": counts, "oracle": oracle})


@_register("zer34-twelve-lines", 2, "the twelve zero-permanent neighbours of P(C_2,4)", 5)
def _zer34(workers):
    C = cyclic(2, 4)
    PC = p_of_h(C)
    Ds = {interchange_hyperplanes(C, axis, i, (i + 1) % 4) for axis in range(3) for i in range(4)}
    zero = mixed = segment = True
    for D in Ds:
        PD = p_of_h(D)
        zero &= permanent1(average([PC, PD])).value == 0
        mixed &= mixed_transversal_exists([C, D]) is None
        segment &= zero_segment(PC, PD)
    ok = len(Ds) == 12 and zero and mixed and segment
    return CheckResult("zer34-twelve-lines", ok,
                       f"distinct={len(Ds)} midpoint-permanents-zero={zero} "
                       f"no-mixed-transversal={mixed} zero-segments={segment}",
                       {"distinct": len(Ds)})


@_register("order4-census", 3, "order-4 squares without transversals", 30)
def _order4(workers):
    squares = list(all_latin_hypercubes(2, 4))
    zero = sum(1 for L in squares if count_transversals(L)[0] == 0)
    oracle = sum(1 for L in squares if transversals_by_column_permutation(L.array) == 0)
    ok = len(squares) == 576 and zero == oracle == 432
    return CheckResult("order4-census", ok, f"squares={len(squares)} zero={zero} oracle={oracle}",
                       {"squares": len(squares), "zero": zero, "oracle": oracle})


@_register("uniform-permanent", 4, "permanent of the uniform matrix", 60)
def _uniform(workers):
    rows, ok = {}, True
    for d, n in [(3, 3), (3, 4), (4, 3), (3, 6)]:
        got = permanent1(uniform(d, n), workers).value
        formula = uniform_permanent(d, n)
        if d == 3 and n == 6:
            oracle = Fraction(pair_permanent_int(np.ones((6, 6, 6), dtype=np.int64)), 6**6)
        else:
            oracle = naive_permanent(uniform(d, n))
        rows[(d, n)] = got
        ok &= got == formula == oracle
    return CheckResult("uniform-permanent", ok,
                       " ".join(f"({d},{n}):{_fmt(v)}" for (d, n), v in rows.items()),
                       {f"{d},{n}": str(v) for (d, n), v in rows.items()})


@_register("zero-family", 5, "zero permanents and no mixed transversals in zero families", 120)
def _zero_family(workers):
    rng = random.Random(2024)
    ok, parts = True, []
    for d, n in [(3, 4), (3, 6), (5, 4)]:
        fixed = ZeroFamilySpec(d, n)
        members = zero_family(fixed, "sample", 20, seed=rng.randrange(1 << 30))
        # members over random windows and axes for the first clause
        roaming = []
        for _ in range(20):
            spec = ZeroFamilySpec(d, n, window_start=rng.randrange(n), axis=rng.randrange(d - 1))
            roaming += zero_family(spec, "sample", 1, seed=rng.randrange(1 << 30))
        perm_zero = all(permanent1(p_of_h(H)).value == 0 for H in members + roaming)
        seen: dict[frozenset, bool] = {}
        for trio in itertools.combinations(members, 3):
            key = frozenset(trio)
            if key not in seen:
                seen[key] = mixed_transversal_exists(list(key)) is None
        mixed_none = all(seen.values())
        ok &= perm_zero and mixed_none
        parts.append(f"({d},{n}) r={fixed.r} distinct={len(set(members))}"
                     f"+{len(set(roaming))} perm0={perm_zero} nomixed={mixed_none}")
    return CheckResult("zero-family", ok, "; ".join(parts))


def _reduced_squares(n: int) -> list[LatinHypercube]:
    partial = np.full((n, n), -1)
    partial[0, :] = np.arange(n)
    partial[:, 0] = np.arange(n)
    return list(completions(partial))


def _delta_sets() -> dict[tuple[int, int], list[LatinHypercube]]:
    rng = random.Random(7)
    sets = {
        (2, 3): list(all_latin_hypercubes(2, 3)),
        (2, 4): list(all_latin_hypercubes(2, 4)),
        (3, 3): list(all_latin_hypercubes(3, 3)),
    }
    five = _reduced_squares(5) + [random_latin_hypercube(2, 5, rng) for _ in range(100)]
    five += [linear_hypercube(2, 5, s, c) for s in range(5) for c in itertools.product(range(1, 5), repeat=2)]
    sets[(2, 5)] = five
    cubes = [random_latin_hypercube(3, 4, rng) for _ in range(300)]
    cubes += [linear_hypercube(3, 4, s, c) for s in range(4) for c in itertools.product((1, 3), repeat=3)]
    sets[(3, 4)] = cubes
    return sets


@_register("delta-parity", 6, "Delta sums over transversals", 120)
def _delta(workers):
    ok, parts = True, []
    for (k, n), cubes in _delta_sets().items():
        expected = 0 if (n % 2 or k % 2) else n // 2
        checked = 0
        for H in cubes:
            for cells in iter_positive_diagonals(p_of_h(H)):
                direct = sum((c[-1] - sum(c[:-1])) % n for c in cells) % n
                try:
                    via_lib = delta_sum_check(H, Diagonal(1, cells))
                except ArithmeticError:
                    via_lib = None
                ok &= direct == expected == via_lib
                checked += 1
        parts.append(f"(k={k},n={n}) cubes={len(set(cubes))} transversals={checked} sum={expected}")
    return CheckResult("delta-parity", ok, "; ".join(parts))


def _random_lambda1(d: int, n: int, rng: random.Random) -> Tensor:
    return p_of_h(random_latin_hypercube(d - 1, n, rng))


def _random_omega1(d: int, n: int, rng: random.Random) -> Tensor:
    m = rng.randint(1, 4)
    raw = [Fraction(rng.randint(1, 9)) for _ in range(m)]
    s = sum(raw)
    return combine(ConvexCombination(tuple((w / s, _random_lambda1(d, n, rng)) for w in raw)))


def _random_lambda2_3d(n: int, rng: random.Random) -> Tensor:
    sigma, tau = rng.sample(range(n), n), rng.sample(range(n), n)
    return Tensor.from_cells(3, n, [(i, sigma[i], tau[i]) for i in range(n)])


@_register("product-laws", 7, "products of polystochastic and permutation matrices", 60)
def _products(workers):
    rng = random.Random(11)
    omega_ok = 0
    for _ in range(200):
        n = rng.choice((2, 3, 4))
        C = product(_random_omega1(3, n, rng), _random_omega1(3, n, rng))
        omega_ok += is_polystochastic(C, 1)
    lam_ok = 0
    trials = 60
    for t in range(trials):
        n = (2, 3, 4)[t % 3]
        C = product(_random_lambda2_3d(n, rng), _random_lambda2_3d(n, rng))
        lam_ok += is_permutation_matrix(C, 3) and planes_scaled(C, 3) == 1
    ok = omega_ok == 200 and lam_ok == trials
    return CheckResult("product-laws", ok,
                       f"omega1 x omega1 in omega1: {omega_ok}/200; "
                       f"lambda2 x lambda2 in lambda3 (alpha=1): {lam_ok}/{trials}")


@_register("a6-certificate", 8, "the order-6 certificate", 1)
def _a6(workers):
    A = a6()
    terms = a6_terms()
    stoch = is_polystochastic(A, 1)
    perms = sum(is_permutation_matrix(t, 2) for t in terms.tensors)
    recombines = combine(terms) == A * Fraction(1, 6) and combine(terms) * 6 == A
    ok = stoch and perms == 8 and recombines
    return CheckResult("a6-certificate", ok,
                       f"polystochastic={stoch} terms-in-lambda2={perms}/8 recombines={recombines}")


@_register("transversal-cover", 9, "transversal covers and orthogonal mates", 30)
def _covers(workers):
    cases = {"cyclic(2,3)": cyclic(2, 3)}
    for n in (3, 4, 5, 7):
        cases[f"mols({n})"] = mols_pair(n)[0]
    ok, parts = True, []
    for name, L in cases.items():
        P = p_of_h(L)
        cover = transversal_cover(P)
        good = (cover is not None and len(cover.parts) == L.order
                and linear_combination((1, Q) for Q in cover.parts) == P
                and all(is_permutation_matrix(Q, 2) for Q in cover.parts)
                and is_orthogonal(L, cover.mate))
        ok &= good
        parts.append(f"{name}:{'cover' if good else 'FAILED'}")
    none4 = transversal_cover(p_of_h(cyclic(2, 4))) is None
    ok &= none4
    parts.append(f"cyclic(2,4):{'none' if none4 else 'UNEXPECTED COVER'}")
    return CheckResult("transversal-cover", ok, " ".join(parts))


@_register("hull-witness", 10, "odd-dimension hull witness", 60)
def _hull(workers):
    cert = hull_witness(5, 3)
    in_lambda4 = all(is_permutation_matrix(t, 4) for t in cert.terms.tensors)
    weights = sum(cert.terms.weights) == 1 and all(w > 0 for w in cert.terms.weights)
    stoch = is_polystochastic(cert.target, 1)
    differs = cert.target != uniform(5, 3)
    ok = cert.verify() and in_lambda4 and weights and stoch and differs
    return CheckResult("hull-witness", ok,
                       f"terms={len(cert.terms)} in-lambda4={in_lambda4} weights-sum-1={weights} "
                       f"target-polystochastic={stoch} target-not-uniform={differs} "
                       f"scale={cert.scale}",
                       {"terms": len(cert.terms)})


@_register("perturbation-signs", 11, "uniform matrix as a local extremum", 120)
def _perturb(workers):
    squares = list(all_latin_hypercubes(2, 4))
    below = sum(all(s < 0 for s in perturbation_scan(p_of_h(L), workers=workers).signs())
                for L in squares)
    cubes = list(all_latin_hypercubes(3, 3))
    above = sum(all(s > 0 for s in perturbation_scan(p_of_h(H), workers=workers).signs())
                for H in cubes)
    base34, base43 = uniform_permanent(3, 4), uniform_permanent(4, 3)
    ok = below == len(squares) and above == len(cubes) and base34 == Fraction(9, 4) and base43 == 8
    return CheckResult("perturbation-signs", ok,
                       f"(3,4): {below}/{len(squares)} squares below {base34}; "
                       f"(4,3): {above}/{len(cubes)} cubes above {base43}")


@_register("independent-zero-set", 12, "linearly independent zero-permanent squares", 60)
def _independent(workers):
    Z = independent_zero_set(3, 8)
    r, indep = rank_independent(Z)
    value = permanent1(average(Z + [p_of_h(cyclic(2, 8))])).value
    ok = len(Z) == 4 and r == 4 and indep and value == 0
    return CheckResult("independent-zero-set", ok, f"members={len(Z)} rank={r} permanent={value}")


def _random_rational_tensor(d: int, n: int, rng: random.Random) -> Tensor:
    vals = []
    for _ in range(n**d):
        if rng.random() < 0.3:
            vals.append(Fraction(0))
        else:
            vals.append(Fraction(rng.randint(-6, 9), rng.randint(1, 7)))
    return Tensor(d, n, vals)


@_register("permanent-oracle", 13, "fast permanent against the naive sum", 120)
def _oracle(workers):
    rng = random.Random(13)
    agree = 0
    for _ in range(200):
        A = _random_rational_tensor(3, rng.randint(1, 4), rng)
        agree += permanent1(A).value == naive_permanent(A)
    agree4 = 0
    for _ in range(50):
        A = _random_rational_tensor(4, 3, rng)
        agree4 += permanent1(A).value == naive_permanent(A)
    ok = agree == 200 and agree4 == 50
    return CheckResult("permanent-oracle", ok, f"d=3: {agree}/200 agree; d=4,n=3: {agree4}/50 agree")
