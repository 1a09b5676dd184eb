"""Combinatorial bookkeeping for divisor-specialization arguments.

Three independent services live here:

* critical pair enumeration: the window of (a, b) whose condition counts
  straddle N; everything outside the window follows from a pair inside it
  by adding or removing components, so sweeps only ever test the window;
* the (f1, e1) decomposition writing alpha = (2n-1) f1 + 2 e1 with
  0 <= e1 <= 2n-2, the unique split of a restricted system's size into
  full tangential traces and tangent-vector traces;
* a specialization-step verifier: realize a scheme with some components on
  a divisor, split into trace and residual, and check the degree ledger
  deg = deg(trace) + deg(residual) together with the section-count bound
  h0(full) <= h0(trace) + h0(residual) coming from restriction.

The step verifier realizes honest schemes only.  The two virtual patterns
with degree splits (1, n) and (2, 2n-1) are proof devices of the
differential method; they appear in the type-table report as
bookkeeping-only rows and are never realized as condition rows.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ambient import (
    AmbientSpace,
    DivisorKind,
    DivisorSpec,
    Multidegree,
    basis_size,
    residual_system,
    trace_system,
)
from .exactlin import RngStream, rank
from .schemes import (
    ComponentKind,
    DirectionMode,
    PlacementConstraint,
    SchemeGroup,
    SchemeSpec,
    matrix_for,
    realize,
    trace_residual_split,
)

# ---------------------------------------------------------------------------
# critical pairs


@dataclass(frozen=True)
class CriticalPair:
    a: int
    b: int
    slack: int  # a(n+1) + b(2n+1) - N

    def key(self) -> tuple[int, int]:
        return (self.a, self.b)


def critical_pairs(
    N: int, n: int, mode: str = "refined", prune_lower: bool = False
) -> list[CriticalPair]:
    """All (a, b) worth testing against a system of size N in dimension n.

    Base mode is the window N - n <= a(n+1) + b(2n+1) <= N + 2n.  Refined
    mode shrinks the b > 0 upper bound to N + n - 1 and caps the b = 0 ray
    at N + n (a heavier mixed pair dominates everything cut away).  (0, 0)
    is never included.  ``prune_lower`` additionally drops b > 0 pairs with
    a > 0 sitting exactly at N - n, each dominated by (a-1, b+1); off by
    default so sweeps stay exhaustive.
    """
    if N < 1 or n < 1:
        raise ValueError("N and n must be >= 1")
    if mode not in ("base", "refined"):
        raise ValueError(f"unknown mode {mode!r}")
    w_dp, w_tg = n + 1, 2 * n + 1
    lo = N - n
    hi = N + 2 * n if mode == "base" else N + n - 1
    pairs = []
    # b = 0 ray
    b0_hi = N + 2 * n if mode == "base" else N + n
    for a in range(max(1, -(-lo // w_dp)), b0_hi // w_dp + 1):
        val = a * w_dp
        if lo <= val <= b0_hi:
            pairs.append(CriticalPair(a, 0, val - N))
    # b > 0
    for b in range(1, hi // w_tg + 1):
        rest_lo, rest_hi = lo - b * w_tg, hi - b * w_tg
        if rest_hi < 0:
            continue
        a_min = max(0, -(-rest_lo // w_dp))
        for a in range(a_min, rest_hi // w_dp + 1):
            val = a * w_dp + b * w_tg
            if lo <= val <= hi:
                if prune_lower and a > 0 and val == N - n:
                    continue
                pairs.append(CriticalPair(a, b, val - N))
    pairs.sort(key=lambda cp: (cp.a, cp.b))
    return pairs


def tangential_sweep_values(N: int, n: int) -> list[int]:
    """b values to test on the purely tangential slice.

    Union of the base window's a = 0 slice with the two decisive values
    floor(N / (2n+1)) and ceil(N / (2n+1)): the largest scheme that could
    still impose independent conditions and the smallest that could already
    fill.  Containment settles every other b from these.
    """
    w = 2 * n + 1
    values = {b for b in range(1, (N + 2 * n) // w + 1) if N - n <= b * w <= N + 2 * n}
    values.add(max(1, N // w))
    values.add(max(1, -(-N // w)))
    return sorted(values)


# ---------------------------------------------------------------------------
# alpha decomposition


@dataclass(frozen=True)
class AlphaDecomposition:
    alpha: int
    n: int
    f1: int
    e1: int
    mu: int  # alpha mod (2n - 1)


def alpha_decomposition(alpha: int, n: int) -> AlphaDecomposition:
    """The unique (f1, e1) with (2n-1) f1 + 2 e1 = alpha and 0 <= e1 <= 2n-2.

    Needs alpha >= 2n - 2 so that f1 stays non-negative when the remainder
    is odd, and n >= 2 so the weights (2n-1) and 2 are distinct.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if alpha < 2 * n - 2:
        raise ValueError(f"alpha must be >= 2n - 2 = {2 * n - 2}, got {alpha}")
    w = 2 * n - 1
    a1, mu = divmod(alpha, w)
    if mu % 2 == 0:
        f1, e1 = a1, mu // 2
    else:
        f1, e1 = a1 - 1, n + (mu - 1) // 2
    assert w * f1 + 2 * e1 == alpha and 0 <= e1 <= 2 * n - 2 and f1 >= 0
    return AlphaDecomposition(alpha=alpha, n=n, f1=f1, e1=e1, mu=mu)


# ---------------------------------------------------------------------------
# specialization step verifier


@dataclass(frozen=True)
class HoraceStepReport:
    deg_full: int
    deg_trace: int
    deg_residual: int
    h0_full: int
    h0_trace: int
    h0_residual: int
    inequality_ok: bool
    samples: tuple[tuple[int, int, int, int, int], ...]  # seed, prime, 3 ranks

    def to_dict(self) -> dict:
        return {
            "deg_full": self.deg_full,
            "deg_trace": self.deg_trace,
            "deg_residual": self.deg_residual,
            "h0_full": self.h0_full,
            "h0_trace": self.h0_trace,
            "h0_residual": self.h0_residual,
            "inequality_ok": self.inequality_ok,
            "samples": [list(s) for s in self.samples],
        }


def horace_step(
    space: AmbientSpace,
    deg: Multidegree,
    spec: SchemeSpec,
    div: DivisorSpec,
    protocol=None,
) -> HoraceStepReport:
    """Realize a partially specialized scheme once per sample and compare the
    full system against its trace and residual.

    Since trace and residual come from the same realization, the bound
    h0(full) <= h0(trace) + h0(residual) is exact linear algebra for every
    sample; ``inequality_ok`` reports it per sample, the h0 fields carry the
    max-rank consensus.
    """
    from .dimension import DEFAULT_PROTOCOL  # local import to keep layering one-way

    protocol = protocol or DEFAULT_PROTOCOL
    deg.check_against(space)
    div.check_against(space)
    spec.check(space)

    t_space, t_deg = trace_system(space, deg, div)
    r_space, r_deg = residual_system(space, deg, div)
    n_full = basis_size(space, deg)
    n_trace = basis_size(t_space, t_deg)
    n_res = basis_size(r_space, r_deg)

    samples = []
    ok = True
    deg_full = deg_trace = deg_res = None
    for seed, prime in protocol.samples():
        realized = realize(spec, space, RngStream(seed, prime))
        tr, res = trace_residual_split(realized, div)
        if deg_full is None:
            deg_full = realized.degree()
            deg_trace = tr.degree()
            deg_res = res.degree()
        rk_f = rank(matrix_for(realized, deg))
        rk_t = rank(matrix_for(tr, t_deg))
        rk_r = rank(matrix_for(res, r_deg))
        samples.append((seed, prime, rk_f, rk_t, rk_r))
        if n_full - rk_f > (n_trace - rk_t) + (n_res - rk_r):
            ok = False
    h0_full = n_full - max(s[2] for s in samples)
    h0_trace = n_trace - max(s[3] for s in samples)
    h0_res = n_res - max(s[4] for s in samples)
    return HoraceStepReport(
        deg_full=deg_full,
        deg_trace=deg_trace,
        deg_residual=deg_res,
        h0_full=h0_full,
        h0_trace=h0_trace,
        h0_residual=h0_res,
        inequality_ok=ok,
        samples=tuple(samples),
    )


# ---------------------------------------------------------------------------
# type table


@dataclass(frozen=True)
class TypeTableEntry:
    label: str
    chain: tuple[int, ...]
    degree_sum: int
    realized: bool
    expected: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.chain == self.expected


@dataclass(frozen=True)
class TypeTableReport:
    n: int
    entries: tuple[TypeTableEntry, ...]

    @property
    def all_ok(self) -> bool:
        return all(e.ok for e in self.entries)


def _split_chain(space, spec, div, seed=1) -> tuple[int, ...]:
    """Successive trace degrees of repeated splitting until nothing remains."""
    realized = realize(spec, space, RngStream(seed))
    chain = []
    current = realized
    while current.placements:
        tr, res = trace_residual_split(current, div)
        chain.append(tr.degree())
        current = res
        if all(pl.divisor is None for pl in current.placements):
            if current.placements:
                chain.append(current.degree())
            break
    return tuple(chain)


def verify_type_table(n: int) -> TypeTableReport:
    """Check the trace/residual degree patterns on P^n for one divisor.

    Realizable patterns: double point (n, 1); tangential scheme with the
    direction inside the divisor (2n-1, 2); transverse direction (n, n, 1)
    via double residuation.  The two virtual patterns are reported with
    their degree sums only.
    """
    if not 2 <= n <= 6:
        raise ValueError("type table is verified for 2 <= n <= 6")
    space = AmbientSpace((n,))
    div = DivisorSpec(0, DivisorKind.HYPERPLANE)
    on_div = PlacementConstraint(div)
    inside = PlacementConstraint(div, DirectionMode.INSIDE)
    transverse = PlacementConstraint(div, DirectionMode.TRANSVERSE)

    def single(kind, constraint):
        return SchemeSpec((SchemeGroup(kind, constraint, 1),))

    entries = [
        TypeTableEntry(
            "double point",
            _split_chain(space, single(ComponentKind.DOUBLE_POINT, on_div), div),
            n + 1,
            True,
            (n, 1),
        ),
        TypeTableEntry(
            "tangential, direction inside",
            _split_chain(space, single(ComponentKind.TANGENTIAL, inside), div),
            2 * n + 1,
            True,
            (2 * n - 1, 2),
        ),
        TypeTableEntry(
            "tangential, direction transverse",
            _split_chain(space, single(ComponentKind.TANGENTIAL, transverse), div),
            2 * n + 1,
            True,
            (n, n, 1),
        ),
        TypeTableEntry(
            "virtual point/double-point pattern", (1, n), n + 1, False, (1, n)
        ),
        TypeTableEntry(
            "virtual vector/tangential pattern",
            (2, 2 * n - 1),
            2 * n + 1,
            False,
            (2, 2 * n - 1),
        ),
    ]
    return TypeTableReport(n, tuple(entries))
