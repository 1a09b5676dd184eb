"""Cohomology reports and secant-variety dimensions from exact ranks.

The rank of the condition matrix at a random realization can only fall
below the generic rank (points landing on a proper closed locus), never
above it, so the consensus over several seeds and primes is the maximum
sampled rank.  From the consensus rank everything else is arithmetic:

    h0 = N - rank        h0_expected = max(0, N - deg Z)
    h1 = deg Z - rank    h1_expected = max(0, deg Z - N)
    defect = h0 - h0_expected = h1 - h1_expected

and a scheme is defective exactly when the defect is positive.  Every
report carries its (seed, prime, rank) samples so any verdict can be
replayed.  Ranks over F_p bound the characteristic-0 generic rank from
below sample by sample; the max-consensus makes the failure probability
negligible but not zero, which is why the provenance stays in the report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ambient import AmbientSpace, Multidegree, basis_size
from .exactlin import DEFAULT_PRIME, SECOND_PRIME, RngStream, rank
from .horace import tangential_sweep_values
from .schemes import SchemeSpec, condition_matrix


class BudgetExceededError(RuntimeError):
    """Basis size beyond the configured cap."""


@dataclass(frozen=True)
class SamplingProtocol:
    """How many independent samples to draw and over which primes."""

    num_seeds: int = 3
    primes: tuple[int, ...] = (DEFAULT_PRIME, SECOND_PRIME)
    base_seed: int = 0

    def __post_init__(self):
        if self.num_seeds < 1:
            raise ValueError("num_seeds must be >= 1")
        if not self.primes:
            raise ValueError("at least one prime is required")

    def samples(self) -> list[tuple[int, int]]:
        return [
            (self.base_seed + k, p)
            for k in range(self.num_seeds)
            for p in self.primes
        ]

    def to_dict(self) -> dict:
        return {
            "num_seeds": self.num_seeds,
            "primes": list(self.primes),
            "base_seed": self.base_seed,
        }


DEFAULT_PROTOCOL = SamplingProtocol()


@dataclass(frozen=True)
class DimensionReport:
    """Everything known about one (space, degree, scheme) instance."""

    N: int
    deg_z: int
    rank_star: int
    h0: int
    h1: int
    h0_expected: int
    h1_expected: int
    defect: int
    samples: tuple[tuple[int, int, int], ...]
    verdict: str

    @property
    def defective(self) -> bool:
        return self.defect > 0

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "deg_z": self.deg_z,
            "rank_star": self.rank_star,
            "h0": self.h0,
            "h1": self.h1,
            "h0_expected": self.h0_expected,
            "h1_expected": self.h1_expected,
            "defect": self.defect,
            "samples": [list(s) for s in self.samples],
            "verdict": self.verdict,
        }


def _assemble_report(n_cols, deg_z, samples) -> DimensionReport:
    rank_star = max(r for _, _, r in samples)
    h0 = n_cols - rank_star
    h1 = deg_z - rank_star
    h0_exp = max(0, n_cols - deg_z)
    h1_exp = max(0, deg_z - n_cols)
    defect = h0 - h0_exp
    return DimensionReport(
        N=n_cols,
        deg_z=deg_z,
        rank_star=rank_star,
        h0=h0,
        h1=h1,
        h0_expected=h0_exp,
        h1_expected=h1_exp,
        defect=defect,
        samples=tuple(samples),
        verdict="Defective" if defect > 0 else "NonDefective",
    )


def cohomology(
    space: AmbientSpace,
    deg: Multidegree,
    spec: SchemeSpec,
    protocol: SamplingProtocol = DEFAULT_PROTOCOL,
    budget: int = 5000,
    cache=None,
) -> DimensionReport:
    """h^0 / h^1 of the ideal sheaf of a realized scheme, by consensus rank.

    One condition matrix per (seed, prime) pair; the optional cache stores
    individual sampled ranks, never the consensus.
    """
    n_cols = basis_size(space, deg)
    if n_cols > budget:
        raise BudgetExceededError(f"N = {n_cols} exceeds budget {budget}")
    spec.check(space)
    deg_z = spec.degree(space)
    samples = []
    for seed, prime in protocol.samples():
        r = None
        if cache is not None:
            r = cache.get(space, deg, spec, seed, prime)
        if r is None:
            m = condition_matrix(spec, space, deg, RngStream(seed, prime))
            r = rank(m)
            if cache is not None:
                cache.put(space, deg, spec, seed, prime, r)
        samples.append((seed, prime, r))
    return _assemble_report(n_cols, deg_z, samples)


@dataclass(frozen=True)
class SecantDimension:
    dim: int
    expected: int
    report: DimensionReport

    @property
    def defective(self) -> bool:
        return self.dim < self.expected

    def to_dict(self) -> dict:
        return {"dim": self.dim, "expected": self.expected, "report": self.report.to_dict()}


def secant_dimension(
    space: AmbientSpace,
    deg: Multidegree,
    a: int,
    b: int,
    protocol: SamplingProtocol = DEFAULT_PROTOCOL,
    budget: int = 5000,
    cache=None,
) -> SecantDimension:
    """Dimension of the join of a copies of the variety and b copies of its
    tangential variety: (N - 1) - h0 against min(N-1, a(n+1)+b(2n+1)-1)."""
    if (a, b) == (0, 0):
        raise ValueError("need at least one component")
    report = cohomology(
        space, deg, SchemeSpec.generic_union(a, b), protocol, budget, cache
    )
    r = report.N - 1
    dim = r - report.h0
    expected = min(r, report.deg_z - 1)
    return SecantDimension(dim=dim, expected=expected, report=report)


@dataclass(frozen=True)
class TangentialSweep:
    """Defectivity scan of the purely tangential (a = 0) slice."""

    tested_b: tuple[int, ...]
    defective_b: tuple[int, ...]
    reports: dict = field(hash=False, compare=False, default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "tested_b": list(self.tested_b),
            "defective_b": list(self.defective_b),
            "reports": {str(b): r.to_dict() for b, r in self.reports.items()},
        }


def is_tangential_defective(
    space: AmbientSpace,
    deg: Multidegree,
    protocol: SamplingProtocol = DEFAULT_PROTOCOL,
    budget: int = 5000,
    cache=None,
) -> TangentialSweep:
    """Scan the critical b values of the a = 0 slice and report defective ones.

    The scan takes the critical window's a = 0 slice plus the two decisive
    values floor(N / (2n+1)) and ceil(N / (2n+1)); the decisive pair is what
    settles every other b by scheme containment.
    """
    n_cols = basis_size(space, deg)
    n = space.total_dim
    values = tangential_sweep_values(n_cols, n)
    reports = {}
    defective = []
    for b in values:
        rep = cohomology(
            space, deg, SchemeSpec.generic_union(0, b), protocol, budget, cache
        )
        reports[b] = rep
        if rep.defective:
            defective.append(b)
    return TangentialSweep(tuple(values), tuple(defective), reports)
