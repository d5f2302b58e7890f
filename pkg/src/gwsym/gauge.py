"""Symbol-level gauge and conservation constraints.

Linear constraint residuals on symmetric-tensor symbols, and exact solution
space dimensions computed by fraction-free rank over the rational-function
field (so the answers are uniform in large rho).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .exact import RhoPoly, RhoRational, ZERO
from .tensor import CoVec4, Metric4, Sym2T


class ConstraintKind(Enum):
    HarmonicGauge = "harmonic-gauge"
    ConservationLaw = "conservation-law"
    ScalarConservation = "scalar-conservation"
    MaxwellConservation = "maxwell-conservation"


def conservation_residual(metric: Metric4, eta: CoVec4, a: Sym2T) -> CoVec4:
    """residual_j = m^{pk} eta_p A_{kj}; zero iff A satisfies the law."""
    inv = metric.inv
    out = []
    for j in range(4):
        total = ZERO
        for p in range(4):
            if eta[p].is_zero():
                continue
            for k in range(4):
                if inv[p][k].is_zero() or a[k][j].is_zero():
                    continue
                total = total + inv[p][k] * eta[p] * a[k][j]
        out.append(total)
    return CoVec4(out)


def harmonic_gauge_residual(metric: Metric4, xi: CoVec4, a: Sym2T) -> CoVec4:
    """residual_mu = -m^{ab} xi_a A_{b mu} + (1/2) m^{ab} xi_mu A_{ab}."""
    first = conservation_residual(metric, xi, a)
    inv = metric.inv
    trace = ZERO
    for p in range(4):
        for q in range(4):
            if inv[p][q].is_zero() or a[p][q].is_zero():
                continue
            trace = trace + inv[p][q] * a[p][q]
    half = RhoRational.const(1) / RhoRational.const(2)
    return CoVec4(tuple(-first[mu] + half * xi[mu] * trace for mu in range(4)))


def scalar_conservation_residual(metric: Metric4, eta: CoVec4, a: Sym2T,
                                 field_symbols, phi_gradients) -> CoVec4:
    """residual_j = (1/2) m^{pk} eta_p A_{kj} + sum_l B_l (grad phi_l)_j."""
    field_symbols = tuple(field_symbols)
    phi_gradients = tuple(phi_gradients)
    if len(field_symbols) != len(phi_gradients):
        raise ValueError("field symbols and gradients must have equal length")
    if not field_symbols:
        raise ValueError("need at least one scalar field")
    base = conservation_residual(metric, eta, a)
    half = RhoRational.const(1) / RhoRational.const(2)
    comps = [half * base[j] for j in range(4)]
    for b, grad in zip(field_symbols, phi_gradients):
        b = b if isinstance(b, RhoRational) else RhoRational.const(b)
        for j in range(4):
            comps[j] = comps[j] + b * grad[j]
    return CoVec4(comps)


def maxwell_conservation_residual(eta: CoVec4, b: CoVec4) -> RhoRational:
    """Componentwise contraction sum_a eta_a B_a of the current symbol."""
    total = ZERO
    for x, y in zip(eta, b):
        total = total + x * y
    return total


# ---------------------------------------------------------------------------
# Solution space dimensions
# ---------------------------------------------------------------------------

_SYM_BASIS = [(i, j) for i in range(4) for j in range(i, 4)]


def _sym_basis_tensor(i: int, j: int) -> Sym2T:
    one = RhoRational.const(1)
    rows = [[ZERO] * 4 for _ in range(4)]
    rows[i][j] = one
    rows[j][i] = one
    return Sym2T(rows)


def _constraint_matrix(kind: ConstraintKind, metric: Metric4, cov: CoVec4):
    """Rows = constraint components, columns = fiber basis elements."""
    if kind in (ConstraintKind.ConservationLaw, ConstraintKind.HarmonicGauge,
                ConstraintKind.ScalarConservation):
        residual = {
            ConstraintKind.ConservationLaw: conservation_residual,
            ConstraintKind.ScalarConservation: conservation_residual,
            ConstraintKind.HarmonicGauge: harmonic_gauge_residual,
        }[kind]
        cols = []
        for i, j in _SYM_BASIS:
            r = residual(metric, cov, _sym_basis_tensor(i, j))
            cols.append([r[mu] for mu in range(4)])
        return [[cols[c][r] for c in range(len(_SYM_BASIS))] for r in range(4)], \
            len(_SYM_BASIS)
    if kind is ConstraintKind.MaxwellConservation:
        return [[cov[a] for a in range(4)]], 4
    raise ValueError(f"unknown constraint kind {kind!r}")


def _rank(matrix) -> int:
    """Fraction-free (Bareiss) rank of a matrix over the field Q(rho).

    Rows are first cleared to polynomials; rank is invariant under the
    nonzero row scalings.
    """
    cleared = []
    for row in matrix:
        den = RhoPoly.const(1)
        for x in row:
            den = den * x.den
        cleared.append([x.num * (den // x.den) for x in row])
    rows = [r for r in cleared if any(not x.is_zero() for x in r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    prev = RhoPoly.const(1)
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows))
                      if not rows[i][c].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(r + 1, len(rows)):
            for j in range(c + 1, ncols):
                num = rows[r][c] * rows[i][j] - rows[i][c] * rows[r][j]
                rows[i][j] = num // prev
            rows[i][c] = RhoPoly()
        prev = rows[r][c]
        rank += 1
        r += 1
        if r == len(rows):
            break
    return rank


@dataclass(frozen=True)
class DimensionResult:
    dimension: int
    fiber_dimension: int
    rank: int
    degenerate: bool


def constraint_space_dim(kind: ConstraintKind, metric: Metric4,
                         cov: CoVec4) -> DimensionResult:
    """Dimension of the constraint's null space on its fiber.

    Fiber is the 10-dimensional space of symmetric 2-tensors, except for the
    Maxwell current law whose fiber is 4-dimensional.  For the scalar law
    the field components are taken to vanish, so the tensor block alone is
    constrained.  A zero covector gives no constraint at all; that case is
    returned with the degeneracy flag set.
    """
    if cov.is_zero():
        fiber = 4 if kind is ConstraintKind.MaxwellConservation else 10
        return DimensionResult(dimension=fiber, fiber_dimension=fiber,
                               rank=0, degenerate=True)
    matrix, fiber = _constraint_matrix(kind, metric, cov)
    rank = _rank(matrix)
    return DimensionResult(dimension=fiber - rank, fiber_dimension=fiber,
                           rank=rank, degenerate=False)
