"""Null covector configurations and flat-model causal checks.

The four-wave configuration consists of four light-like covectors depending
on the large parameter rho whose sum is again light-like.  Causal relations
are checked in the flat Minkowski model (the tangent-space picture at the
interaction point), with the causal future treated as closed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import RhoRational, ZERO
from .tensor import (CoVec4, MINKOWSKI, Metric4, det4, norm_sq, pairing)


class ConfigError(ValueError):
    """A covector configuration violates a structural invariant."""


class NullConfig:
    """Four light-like covectors, linearly independent, with light-like sum."""

    __slots__ = ("zetas", "metric")

    def __init__(self, zetas, metric: Metric4 = MINKOWSKI, validate: bool = True):
        zetas = tuple(zetas)
        if len(zetas) != 4:
            raise ConfigError("need exactly four covectors")
        object.__setattr__(self, "zetas", zetas)
        object.__setattr__(self, "metric", metric)
        if validate:
            self._validate()

    def __setattr__(self, name, value):
        raise AttributeError("NullConfig is immutable")

    def _validate(self):
        for i, z in enumerate(self.zetas, start=1):
            n = norm_sq(self.metric, z)
            if not n.is_zero():
                raise ConfigError(f"covector {i} is not light-like: |.|^2 = {n!r}")
        d = det4(tuple(z.c for z in self.zetas))
        if d.is_zero():
            raise ConfigError("covectors are linearly dependent")
        total = self.total()
        n = norm_sq(self.metric, total)
        if not n.is_zero():
            raise ConfigError(f"sum of covectors is not light-like: {n!r}")

    def zeta(self, i: int) -> CoVec4:
        """Covector number i, 1-based."""
        return self.zetas[i - 1]

    def total(self) -> CoVec4:
        t = self.zetas[0]
        for z in self.zetas[1:]:
            t = t + z
        return t

    def subset_sum(self, indices) -> CoVec4:
        out = None
        for i in indices:
            out = self.zeta(i) if out is None else out + self.zeta(i)
        if out is None:
            raise ValueError("empty index set")
        return out

    def pairing_table(self) -> dict:
        """All six pairings h(zeta_i, zeta_j), i < j."""
        return {(i, j): pairing(self.metric, self.zeta(i), self.zeta(j))
                for i in range(1, 5) for j in range(i + 1, 5)}

    def triple_norm_table(self) -> dict:
        """|zeta_i + zeta_j + zeta_k|^2 for the four triples."""
        out = {}
        for triple in ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)):
            out[triple] = norm_sq(self.metric, self.subset_sum(triple))
        return out

    def __eq__(self, other):
        return (isinstance(other, NullConfig) and self.zetas == other.zetas
                and self.metric == other.metric)

    def __hash__(self):
        return hash((self.zetas, self.metric))


def base_directions():
    """The four integer null covectors the standard configuration scales."""
    return (CoVec4((1, 0, 1, 0)),
            CoVec4((1, 0, 0, 1)),
            CoVec4((-1, -1, 0, 0)),
            CoVec4((1, -1, 0, 0)))


def solve_null_scale(alpha1, alpha2, alpha4, tilde_zetas,
                     metric: Metric4 = MINKOWSKI) -> RhoRational:
    """Unique alpha3 making |a1 z1 + a2 z2 + a3 z3 + a4 z4|^2 vanish.

    All four covectors must be light-like, so the norm is linear in alpha3;
    a vanishing linear coefficient is reported with the offending pairings.
    """
    a1, a2, a4 = (x if isinstance(x, RhoRational) else RhoRational.const(x)
                  for x in (alpha1, alpha2, alpha4))
    z1, z2, z3, z4 = tilde_zetas
    p = lambda a, b: pairing(metric, a, b)
    linear = 2 * (a1 * p(z1, z3) + a2 * p(z2, z3) + a4 * p(z3, z4))
    constant = 2 * (a1 * a2 * p(z1, z2) + a1 * a4 * p(z1, z4)
                    + a2 * a4 * p(z2, z4))
    if linear.is_zero():
        raise ConfigError(
            "alpha3 coefficient vanishes: "
            f"a1*h(z1,z3) + a2*h(z2,z3) + a4*h(z3,z4) = 0 "
            f"(pairings {p(z1, z3)!r}, {p(z2, z3)!r}, {p(z3, z4)!r})")
    return -constant / linear


def standard_config() -> NullConfig:
    """The rho-dependent four-covector configuration used everywhere.

    zeta1 = (1,0,1,0), zeta2 = -(1,0,0,1), zeta3 = rho^-10/2 (1,1,0,0),
    zeta4 = rho^10 (1,-1,0,0); built by solving for the third scale so the
    sum is light-like, then validated.
    """
    t1, t2, t3, t4 = base_directions()
    a1 = RhoRational.const(1)
    a2 = RhoRational.const(-1)
    a4 = RhoRational.rho_power(10)
    a3 = solve_null_scale(a1, a2, a4, (t1, t2, t3, t4))
    zetas = (t1.scale(a1), t2.scale(a2), t3.scale(a3), t4.scale(a4))
    return NullConfig(zetas)


# ---------------------------------------------------------------------------
# Flat causal model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FlatPoint:
    """Point of Minkowski space with exact rational coordinates."""

    x0: Fraction
    x1: Fraction
    x2: Fraction
    x3: Fraction

    @staticmethod
    def of(*coords) -> "FlatPoint":
        return FlatPoint(*(Fraction(c) for c in coords))

    def coords(self):
        return (self.x0, self.x1, self.x2, self.x3)


def in_causal_future(p: FlatPoint, q: FlatPoint) -> bool:
    """True iff q lies in the closed causal future of p (Minkowski)."""
    dt = q.x0 - p.x0
    if dt < 0:
        return False
    dx = (q.x1 - p.x1, q.x2 - p.x2, q.x3 - p.x3)
    return dt * dt >= sum(d * d for d in dx)


def causally_unrelated(p: FlatPoint, q: FlatPoint) -> bool:
    """Neither point lies in the closed causal future of the other."""
    return not (in_causal_future(p, q) or in_causal_future(q, p))


@dataclass(frozen=True)
class BacktraceResult:
    sources: tuple
    pair_table: dict
    all_unrelated: bool
    directions: tuple
    independent_directions: bool


def future_null_direction(zeta: CoVec4, rho_value: Fraction,
                          metric: Metric4 = MINKOWSKI) -> tuple:
    """Future-pointing null vector dual to ``zeta`` at a concrete rho.

    The raised vector is rescaled so its time component equals one, which
    makes backtrace times read as coordinate-time offsets.
    """
    rho_value = Fraction(rho_value)
    raised = [c.eval_at(rho_value) for c in
              (x for x in _raise_numeric(zeta, rho_value, metric))]
    t = raised[0]
    if t == 0:
        raise ConfigError("covector raises to a spatial vector")
    if t < 0:
        raised = [-x for x in raised]
        t = -t
    return tuple(x / t for x in raised)


def _raise_numeric(zeta: CoVec4, rho_value: Fraction, metric: Metric4):
    inv = metric.inv
    for a in range(4):
        total = ZERO
        for b in range(4):
            if inv[a][b].is_zero() or zeta[b].is_zero():
                continue
            total = total + inv[a][b] * zeta[b]
        yield total


def backtrace_sources(q0: FlatPoint, config: NullConfig, rho_value,
                      times) -> BacktraceResult:
    """Source points whose null rays meet at q0, plus the causal report.

    Each source is q0 - t_i * v_i with v_i the future-normalized direction
    of covector i at the given rho; a configuration failing pairwise
    unrelatedness is reported, not rejected.
    """
    rho_value = Fraction(rho_value)
    if rho_value <= 1:
        raise ValueError("rho_value must exceed 1")
    times = tuple(Fraction(t) for t in times)
    if len(times) != 4:
        raise ValueError("need four times")
    if any(t < 0 for t in times):
        raise ValueError("times must be non-negative")
    directions = tuple(future_null_direction(config.zeta(i), rho_value,
                                             config.metric)
                       for i in range(1, 5))
    q = q0.coords()
    sources = tuple(
        FlatPoint(*(qc - t * dc for qc, dc in zip(q, d)))
        for t, d in zip(times, directions))
    pair_table = {}
    for i in range(4):
        for j in range(i + 1, 4):
            pair_table[(i + 1, j + 1)] = causally_unrelated(sources[i],
                                                            sources[j])
    rows = tuple((Fraction(1),) + d[1:] for d in directions)
    det = _det4_fraction(rows)
    return BacktraceResult(sources=sources, pair_table=pair_table,
                           all_unrelated=all(pair_table.values()),
                           directions=directions,
                           independent_directions=det != 0)


def _det4_fraction(rows) -> Fraction:
    a = [list(r) for r in rows]
    det = Fraction(1)
    for col in range(4):
        pivot = next((r for r in range(col, 4) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, 4):
            f = a[r][col] / a[col][col]
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det
