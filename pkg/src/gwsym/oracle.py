"""Independent verification paths for the interaction symbols.

Two routes that never touch the exact form engine:

* A truncated multilinear "jet" expansion over the sixteen wave subsets.
  Fields are maps subset -> 4x4 matrix; products convolve disjoint subsets,
  derivatives multiply a component by i times its aggregate covector, and
  the causal inverse divides by the aggregate covector's squared norm.  The
  full nonlinear reduced curvature operator is evaluated directly on this
  algebra and iterated, which reproduces the complete four-wave interaction
  sum without ever enumerating terms.  The scalar ring is pluggable: exact
  Gaussian rationals or complex floating point.

* A direct floating-point evaluator for individual term trees built from
  the closed quasilinear chains and the explicit quadratic semilinear form.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .interaction import FormNode, Leaf, QNode
from .nullcone import NullConfig

FULL = frozenset({1, 2, 3, 4})


# ---------------------------------------------------------------------------
# Scalar rings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianRational:
    """Exact complex rational a + b i."""

    re: Fraction
    im: Fraction

    @staticmethod
    def of(x) -> "GaussianRational":
        return GaussianRational(Fraction(x), Fraction(0))

    def __add__(self, o):
        return GaussianRational(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, o):
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    def __truediv__(self, o):
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational((self.re * o.re + self.im * o.im) / d,
                                (self.im * o.re - self.re * o.im) / d)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def times_i(self) -> "GaussianRational":
        return GaussianRational(-self.im, self.re)


class ExactRing:
    zero = GaussianRational.of(0)
    one = GaussianRational.of(1)

    @staticmethod
    def of(x):
        return GaussianRational.of(x)

    @staticmethod
    def times_i(x):
        return x.times_i()

    @staticmethod
    def is_zero(x):
        return x.is_zero()


class FloatRing:
    zero = np.clongdouble(0)
    one = np.clongdouble(1)

    @staticmethod
    def of(x):
        return np.clongdouble(float(x))

    @staticmethod
    def times_i(x):
        return x * np.clongdouble(1j)

    @staticmethod
    def is_zero(x):
        return x == 0


# ---------------------------------------------------------------------------
# Configuration data at a concrete rho
# ---------------------------------------------------------------------------

class JetContext:
    """Covectors, subset sums and norms of a configuration at fixed rho.

    ``leaf_symbols`` may override the default rank-one wave amplitudes with
    exact 4x4 matrices of rationals (or anything Fraction-convertible).
    """

    def __init__(self, config: NullConfig, rho, ring, leaf_symbols=None):
        self.ring = ring
        rho = Fraction(rho)
        zetas = {}
        for i in range(1, 5):
            zetas[i] = tuple(Fraction(c.eval_at(rho)) for c in config.zeta(i))
        minkdiag = (Fraction(-1), Fraction(1), Fraction(1), Fraction(1))
        self.xi = {}
        self.norm = {}
        for bits in range(1, 16):
            s = frozenset(i for i in range(1, 5) if bits & (1 << (i - 1)))
            xi = tuple(sum(zetas[i][a] for i in s) for a in range(4))
            self.xi[s] = tuple(ring.of(x) for x in xi)
            self.norm[s] = ring.of(sum(d * x * x
                                       for d, x in zip(minkdiag, xi)))
        self.hinv = [[ring.of(0)] * 4 for _ in range(4)]
        for a in range(4):
            self.hinv[a][a] = ring.of(minkdiag[a])
        overrides = leaf_symbols or {}
        self.amplitudes = {}
        for i in range(1, 5):
            if i in overrides:
                m = overrides[i]
                self.amplitudes[i] = [
                    [ring.of(Fraction(m[a][b]) if not hasattr(m[a][b], "eval_at")
                             else m[a][b].eval_at(rho)) for b in range(4)]
                    for a in range(4)]
            else:
                self.amplitudes[i] = [
                    [ring.of(zetas[i][a] * zetas[i][b]) for b in range(4)]
                    for a in range(4)]

    def zero_mat(self):
        return [[self.ring.zero] * 4 for _ in range(4)]


class JetField:
    """Map from nonempty wave subsets to 4x4 matrices over the ring."""

    def __init__(self, ctx: JetContext, components=None):
        self.ctx = ctx
        self.components = dict(components or {})

    def copy(self):
        return JetField(self.ctx, {s: [row[:] for row in m]
                                   for s, m in self.components.items()})

    def add(self, other: "JetField") -> "JetField":
        out = self.copy()
        for s, m in other.components.items():
            if s in out.components:
                tgt = out.components[s]
                for a in range(4):
                    for b in range(4):
                        tgt[a][b] = tgt[a][b] + m[a][b]
            else:
                out.components[s] = [row[:] for row in m]
        return out

    def negate(self) -> "JetField":
        return JetField(self.ctx, {
            s: [[-x for x in row] for row in m]
            for s, m in self.components.items()})

    def truncate(self, max_size: int) -> "JetField":
        return JetField(self.ctx, {s: m for s, m in self.components.items()
                                   if len(s) <= max_size})

    def entry(self, s, a, b):
        m = self.components.get(s)
        return m[a][b] if m is not None else self.ctx.ring.zero

    def deriv(self, p: int) -> "JetField":
        """Componentwise multiplication by i * (aggregate covector)_p."""
        ctx = self.ctx
        out = {}
        for s, m in self.components.items():
            factor = ctx.ring.times_i(ctx.xi[s][p])
            out[s] = [[factor * x for x in row] for row in m]
        return JetField(ctx, out)

    def causal_inverse(self) -> "JetField":
        """Divide each component by its covector's squared norm."""
        ctx = self.ctx
        out = {}
        for s, m in self.components.items():
            n = ctx.norm[s]
            if ctx.ring.is_zero(n):
                raise ZeroDivisionError(
                    f"characteristic covector sum over waves {sorted(s)}")
            out[s] = [[x / n for x in row] for row in m]
        return JetField(ctx, out)


def _jet_matmul(ctx, a: JetField, b: JetField) -> JetField:
    out = {}
    for s1, m1 in a.components.items():
        for s2, m2 in b.components.items():
            if s1 & s2:
                continue
            s = s1 | s2
            tgt = out.get(s)
            if tgt is None:
                tgt = ctx.zero_mat()
                out[s] = tgt
            for i in range(4):
                row1 = m1[i]
                for k in range(4):
                    x = row1[k]
                    if ctx.ring.is_zero(x):
                        continue
                    row2 = m2[k]
                    trow = tgt[i]
                    for j in range(4):
                        trow[j] = trow[j] + x * row2[j]
    return JetField(ctx, out)


def _ginv_series(ctx, u: JetField) -> JetField:
    """(h + u)^{-1} on the jet algebra; the series terminates exactly.

    Components are indexed with the identity (size-0) part kept separately:
    returns a JetField whose empty-set component is the constant inverse
    metric.
    """
    hinv = JetField(ctx, {frozenset(): [row[:] for row in ctx.hinv]})
    # x = -h^{-1} u, nilpotent: (h+u)^{-1} = (1 + x + x^2 + x^3 + x^4) h^{-1}
    x = _jet_matmul(ctx, hinv, u).negate()
    total = JetField(ctx, {frozenset(): [[ctx.ring.one if i == j else ctx.ring.zero
                                          for j in range(4)] for i in range(4)]})
    power = total
    for _ in range(4):
        power = _jet_matmul(ctx, power, x)
        if not power.components:
            break
        total = total.add(power)
    return _jet_matmul(ctx, total, hinv)


def _nonlinearity(ctx, u: JetField) -> JetField:
    """The quadratic-and-higher part of the reduced wave operator.

    N(u) = -(g^{pq} - h^{pq}) d_p d_q u
           + 2 g^{ab} g^{sg} G(u)_{s mu b} G(u)_{g nu a}
           + G(u)_{nu a b} g^{aq} g^{bd} d_mu u_{qd} + (mu <-> nu),
    with G(u)_{l a b} = (d_b u_{la} + d_a u_{lb} - d_l u_{ab}) / 2 and g the
    full inverse series.  Every component of the result is the exact symbol
    of the corresponding wave-subset interaction.
    """
    ring = ctx.ring
    ginv = _ginv_series(ctx, u)
    gpert = JetField(ctx, {s: m for s, m in ginv.components.items() if s})

    result: dict = {}

    def add_into(s, mat):
        tgt = result.get(s)
        if tgt is None:
            result[s] = mat
        else:
            for a in range(4):
                for b in range(4):
                    tgt[a][b] = tgt[a][b] + mat[a][b]

    # Quasilinear part: -(g - h)^{pq} d_p d_q u
    du2 = {}
    for p in range(4):
        dp = u.deriv(p)
        for q in range(p, 4):
            du2[(p, q)] = dp.deriv(q)
    for s1, m1 in gpert.components.items():
        for p in range(4):
            for q in range(4):
                c = m1[p][q]
                if ring.is_zero(c):
                    continue
                dd = du2[(p, q) if p <= q else (q, p)]
                for s2, m2 in dd.components.items():
                    if s1 & s2:
                        continue
                    s = s1 | s2
                    mat = [[-(c * m2[a][b]) for b in range(4)]
                           for a in range(4)]
                    add_into(s, mat)

    # Christoffel contraction as a jet 3-tensor per component.
    gamma = {}
    half = ring.of(Fraction(1, 2))
    for s, m in u.components.items():
        xi = ctx.xi[s]
        g3 = [[[None] * 4 for _ in range(4)] for _ in range(4)]
        for l in range(4):
            for a in range(4):
                for b in range(4):
                    v = half * (ring.times_i(xi[b]) * m[l][a]
                                + ring.times_i(xi[a]) * m[l][b]
                                - ring.times_i(xi[l]) * m[a][b])
                    g3[l][a][b] = v
        gamma[s] = g3

    ginv_all = ginv.components  # includes the constant part

    # Semilinear quadratic-derivative part.
    for sg1, g1 in gamma.items():
        for sg2, g2 in gamma.items():
            if sg1 & sg2:
                continue
            for sa, ma in ginv_all.items():
                if sa & (sg1 | sg2):
                    continue
                for sb, mb in ginv_all.items():
                    if sb & (sg1 | sg2 | sa):
                        continue
                    s = sg1 | sg2 | sa | sb
                    mat = ctx.zero_mat()
                    nonzero = False
                    for mu in range(4):
                        for nu in range(4):
                            acc = ring.zero
                            for a in range(4):
                                for b in range(4):
                                    hab = ma[a][b]
                                    if ring.is_zero(hab):
                                        continue
                                    for l in range(4):
                                        t1 = g1[l][mu][b]
                                        if ring.is_zero(t1):
                                            continue
                                        for g in range(4):
                                            hlg = mb[l][g]
                                            if ring.is_zero(hlg):
                                                continue
                                            t2 = g2[g][nu][a]
                                            if ring.is_zero(t2):
                                                continue
                                            acc = acc + (ring.of(2) * hab
                                                         * hlg * t1 * t2)
                            if not ring.is_zero(acc):
                                nonzero = True
                            mat[mu][nu] = acc
                    if nonzero:
                        add_into(s, mat)

    # G(u)_{nu a b} g^{aq} g^{bd} d_mu u_{qd} + (mu <-> nu)
    for sg1, g1 in gamma.items():
        for s2, m2 in u.components.items():
            if sg1 & s2:
                continue
            xi2 = ctx.xi[s2]
            for sa, ma in ginv_all.items():
                if sa & (sg1 | s2):
                    continue
                for sb, mb in ginv_all.items():
                    if sb & (sg1 | s2 | sa):
                        continue
                    s = sg1 | s2 | sa | sb
                    sand = [ring.zero] * 4
                    for x in range(4):
                        acc = ring.zero
                        for a in range(4):
                            for q in range(4):
                                haq = ma[a][q]
                                if ring.is_zero(haq):
                                    continue
                                for b in range(4):
                                    t = g1[x][a][b]
                                    if ring.is_zero(t):
                                        continue
                                    for d in range(4):
                                        hbd = mb[b][d]
                                        if ring.is_zero(hbd):
                                            continue
                                        acc = acc + haq * hbd * t * m2[q][d]
                        sand[x] = acc
                    mat = ctx.zero_mat()
                    nonzero = False
                    for mu in range(4):
                        dmu = ring.times_i(xi2[mu])
                        for nu in range(4):
                            v = dmu * sand[nu] + ring.times_i(xi2[nu]) * sand[mu]
                            mat[mu][nu] = v
                            if not ring.is_zero(v):
                                nonzero = True
                    if nonzero:
                        add_into(s, mat)

    return JetField(ctx, result)


def interaction_total_jet(config: NullConfig, rho, exact: bool = False,
                          leaf_symbols=None):
    """Full four-wave interaction symbol via the jet iteration.

    Returns the 4x4 matrix of the complete interaction sum at the given rho
    (exact Gaussian rationals or complex floating point), in the same
    normalization as the exact engine: real part is the folded value, and
    the imaginary part must vanish.
    """
    ring = ExactRing if exact else FloatRing
    ctx = JetContext(config, rho, ring, leaf_symbols=leaf_symbols)
    v = JetField(ctx, {frozenset({i}): [row[:] for row in ctx.amplitudes[i]]
                       for i in range(1, 5)})
    u = v
    for _ in range(3):
        correction = _nonlinearity(ctx, u).truncate(3).causal_inverse()
        u = v.add(correction.negate())
    final = _nonlinearity(ctx, u)
    mat = final.components.get(FULL)
    if mat is None:
        mat = ctx.zero_mat()
    return [[-x for x in row] for row in mat]


# ---------------------------------------------------------------------------
# Direct floating-point evaluation of individual term trees
# ---------------------------------------------------------------------------

class OracleUnsupported(ValueError):
    pass


def _config_float(config: NullConfig, rho):
    rho = Fraction(rho)
    zetas = {i: np.array([float(c.eval_at(rho)) for c in config.zeta(i)],
                         dtype=np.clongdouble)
             for i in range(1, 5)}
    hinv = np.diag(np.array([-1.0, 1.0, 1.0, 1.0], dtype=np.clongdouble))
    return zetas, hinv


def eval_ast_float(ast, config: NullConfig, rho):
    """Independent complex evaluation of one term tree.

    Supports the quasilinear chains and the explicit quadratic semilinear
    form; higher semilinear forms have no closed expression here and raise
    OracleUnsupported.
    """
    zetas, hinv = _config_float(config, rho)

    def walk(node):
        if isinstance(node, Leaf):
            z = zetas[node.wave]
            return np.outer(z, z).astype(np.clongdouble), z
        if isinstance(node, QNode):
            m, xi = walk(node.child)
            n = xi @ hinv @ xi
            if abs(n) == 0:
                raise ZeroDivisionError("characteristic covector sum")
            return m / n, xi
        kind, k = node.form
        parts = [walk(c) for c in node.children]
        xi_total = sum(x for _, x in parts)
        if kind == "P":
            sign = (-1.0) ** k
            mid = hinv.copy()
            for m, _ in parts[:-1]:
                mid = mid @ m @ hinv
            xi = parts[-1][1]
            scalar = sign * (1j * xi) @ mid @ (1j * xi)
            return scalar * parts[-1][0], xi_total
        if node.form == ("Hhat", 2):
            (m1, xi1), (m2, xi2) = parts
            return _hhat2_float(hinv, m1, xi1, m2, xi2), xi_total
        raise OracleUnsupported(
            f"no independent closed form for {node.form} nodes")

    m, _ = walk(ast)
    return m


def _hhat2_float(hinv, m1, xi1, m2, xi2):
    def gam(m, xi):
        d = 1j * xi
        return 0.5 * (np.einsum("b,la->lab", d, m)
                      + np.einsum("a,lb->lab", d, m)
                      - np.einsum("l,ab->lab", d, m))

    g1 = gam(m1, xi1)
    g2 = gam(m2, xi2)
    term_a = 2.0 * np.einsum("ab,lg,lmb,gna->mn", hinv, hinv, g1, g2)
    sand = np.einsum("nab,aq,bd,qd->n", g1, hinv, hinv, m2)
    d2 = 1j * xi2
    term_b = np.einsum("m,n->mn", d2, sand) + np.einsum("n,m->mn", d2, sand)
    return term_a + term_b


def numeric_oracle(target, rho_value, config: NullConfig):
    """Floating-point oracle: a term tree, or the key ``"total"``.

    rho should stay within moderate range (roughly 1.5 .. 4): matrix entries
    span sixty powers of rho, and the top-order cancellations cost the
    corresponding number of digits.
    """
    rho = Fraction(rho_value)
    if isinstance(target, str):
        if target == "total":
            mat = interaction_total_jet(config, rho, exact=False)
            return np.array(mat, dtype=np.clongdouble)
        raise OracleUnsupported(f"unknown oracle target {target!r}")
    return np.array(eval_ast_float(target, config, rho),
                    dtype=np.clongdouble)


def cancellation_scale(config: NullConfig, rho) -> float:
    """Intrinsic magnitude of the largest single interaction term.

    The grand total is a sum with massive top-order cancellations; any
    floating-point route carries roundoff proportional to the largest
    summand, so relative agreement is only meaningful against this scale
    once entries cancel below it.  Computed from the six nested-chain
    permutation terms, which dominate every other term.
    """
    from .interaction import FormNode, Leaf, QNode
    import itertools as it
    scale = 0.0
    for a, b, c in it.permutations((1, 2, 3)):
        ast = FormNode(("P", 2), (Leaf(a), QNode(
            FormNode(("P", 2), (Leaf(b), QNode(
                FormNode(("P", 2), (Leaf(c), Leaf(4)))))))))
        m = eval_ast_float(ast, config, rho)
        scale = max(scale, float(np.max(np.abs(np.asarray(m)))))
    return scale


def max_rel_diff(exact_matrix_at_rho, oracle_matrix, floor: float = 0.0) -> float:
    """Max per-entry relative difference.

    Each entry is compared relative to max(|exact|, |oracle|, floor); the
    floor is the caller's noise scale (zero for plain relative comparison).
    """
    a = np.array([[float(x) for x in row] for row in exact_matrix_at_rho],
                 dtype=np.float64)
    b = np.asarray(oracle_matrix)
    if np.max(np.abs(b.imag)) > 1e-6 * max(1.0, float(np.max(np.abs(b.real)))):
        raise ArithmeticError("oracle matrix has a non-negligible imaginary part")
    b = np.asarray(b.real, dtype=np.float64)
    out = 0.0
    for i in range(4):
        for j in range(4):
            denom = max(abs(a[i][j]), abs(b[i][j]), floor, 1e-300)
            out = max(out, abs(a[i][j] - b[i][j]) / denom)
    return out
