"""Exact multivariate polynomials on a Lie algebra's coordinate ring, with an
extra deformation variable eps.

A term is (exponent vector over the n basis coordinates, eps power) with a
rational coefficient.  Two gradings matter downstream: deg_q counts only the
exponents of q-coordinates (indices >= t of a split), deg_eps the eps power.
Values are immutable; every operation returns a fresh Poly.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .liealg import AlgebraError, LieAlgebra, SplitData, format_rational, parse_rational

Mono = tuple[tuple[int, ...], int]   # (exponents, eps power)


class Poly:
    __slots__ = ("ambient", "terms")

    def __init__(self, ambient: LieAlgebra, terms: dict[Mono, Fraction] | None = None):
        self.ambient = ambient
        self.terms: dict[Mono, Fraction] = {}
        if terms:
            for key, c in terms.items():
                if c != 0:
                    self.terms[key] = c

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(g: LieAlgebra) -> Poly:
        return Poly(g)

    @staticmethod
    def constant(g: LieAlgebra, c) -> Poly:
        c = Fraction(c)
        return Poly(g, {((0,) * g.dim, 0): c})

    @staticmethod
    def coordinate(g: LieAlgebra, i: int) -> Poly:
        e = [0] * g.dim
        e[i] = 1
        return Poly(g, {(tuple(e), 0): Fraction(1)})

    @staticmethod
    def eps(g: LieAlgebra, power: int = 1) -> Poly:
        return Poly(g, {((0,) * g.dim, power): Fraction(1)})

    @staticmethod
    def monomial(g: LieAlgebra, exps, eps_pow: int = 0, coeff=1) -> Poly:
        return Poly(g, {(tuple(exps), eps_pow): Fraction(coeff)})

    # -- ring structure ------------------------------------------------------

    def _check(self, other: Poly):
        if other.ambient is not self.ambient and other.ambient != self.ambient:
            raise AlgebraError("ambient algebra mismatch")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.ambient, other)
        self._check(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            s = terms.get(key, Fraction(0)) + c
            if s == 0:
                terms.pop(key, None)
            else:
                terms[key] = s
        return Poly(self.ambient, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ambient, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.ambient, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        terms: dict[Mono, Fraction] = {}
        for (e1, p1), c1 in self.terms.items():
            for (e2, p2), c2 in other.terms.items():
                key = (tuple(a + b for a, b in zip(e1, e2)), p1 + p2)
                s = terms.get(key, Fraction(0)) + c1 * c2
                if s == 0:
                    terms.pop(key, None)
                else:
                    terms[key] = s
        return Poly(self.ambient, terms)

    __rmul__ = __mul__

    def scale(self, c) -> Poly:
        c = Fraction(c)
        if c == 0:
            return Poly(self.ambient)
        return Poly(self.ambient, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ambient == other.ambient and self.terms == other.terms
        return self - other == 0 if other else not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def deg_eps(self) -> int:
        return max((p for (_, p) in self.terms), default=0)

    def deg_q(self, split: SplitData) -> int:
        t = split.t
        return max((sum(e[t:]) for (e, _) in self.terms), default=0)

    def total_deg(self) -> int:
        return max((sum(e) for (e, _) in self.terms), default=0)

    def coefficient(self, exps, eps_pow: int = 0) -> Fraction:
        return self.terms.get((tuple(exps), eps_pow), Fraction(0))

    def uses_only(self, indices) -> bool:
        allowed = set(indices)
        return all(all(e[i] == 0 for i in range(len(e)) if i not in allowed)
                   for (e, _) in self.terms)

    def eps_component(self, p: int) -> Poly:
        """The coefficient of eps^p, as an eps-free polynomial."""
        return Poly(self.ambient,
                    {(e, 0): c for (e, q), c in self.terms.items() if q == p})

    def q_homogeneous_component(self, split: SplitData, k: int) -> Poly:
        t = split.t
        return Poly(self.ambient, {key: c for key, c in self.terms.items()
                                   if sum(key[0][t:]) == k})

    # -- calculus ------------------------------------------------------------

    def diff(self, i: int) -> Poly:
        terms: dict[Mono, Fraction] = {}
        for (e, p), c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            terms[(tuple(e2), p)] = c * e[i]
        return Poly(self.ambient, terms)

    def substitute_coord(self, i: int, value: Poly | Fraction) -> Poly:
        """Substitute x_i <- value (a constant or polynomial)."""
        if not isinstance(value, Poly):
            value = Poly.constant(self.ambient, value)
        out = Poly(self.ambient)
        for (e, p), c in self.terms.items():
            e2 = list(e)
            k = e2[i]
            e2[i] = 0
            term = Poly(self.ambient, {(tuple(e2), p): c})
            for _ in range(k):
                term = term * value
            out = out + term
        return out

    def substitute_eps(self, value: Fraction) -> Poly:
        value = Fraction(value)
        out: dict[Mono, Fraction] = {}
        for (e, p), c in self.terms.items():
            key = (e, 0)
            s = out.get(key, Fraction(0)) + c * value ** p
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return Poly(self.ambient, out)

    # -- rendering ------------------------------------------------------------

    def render(self) -> str:
        """Canonical text: terms sorted, coefficients as p/q,
        e.g. ``3/2*x^2*eps + -1*y``."""
        if not self.terms:
            return "0"
        labels = self.ambient.labels
        chunks = []
        for (e, p), c in sorted(self.terms.items()):
            factors = [format_rational(c)]
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(labels[i])
                elif k > 1:
                    factors.append(f"{labels[i]}^{k}")
            if p == 1:
                factors.append("eps")
            elif p > 1:
                factors.append(f"eps^{p}")
            chunks.append("*".join(factors))
        return " + ".join(chunks)

    def __repr__(self):
        return f"Poly({self.render()})"


def parse_poly(g: LieAlgebra, text: str) -> Poly:
    """Inverse of Poly.render, accepting '-' separators as well."""
    text = text.strip()
    if text in ("", "0"):
        return Poly.zero(g)
    text = text.replace("- ", "+ -1*") if " - " in text else text
    out = Poly.zero(g)
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            continue
        coeff = Fraction(1)
        exps = [0] * g.dim
        eps_pow = 0
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                raise AlgebraError(f"empty factor in {chunk!r}")
            name, _, pow_txt = factor.partition("^")
            power = int(pow_txt) if pow_txt else 1
            if name == "eps":
                eps_pow += power
            elif name in g.labels:
                exps[g.index_of(name)] += power
            else:
                if pow_txt:
                    raise AlgebraError(f"unknown variable {name!r}")
                coeff *= parse_rational(name)
        out = out + Poly.monomial(g, exps, eps_pow, coeff)
    return out


# ---------------------------------------------------------------------------
# Poisson structure, scaling morphism, homogenization, Moyal product.
# ---------------------------------------------------------------------------

def poisson_bracket(p: Poly, q: Poly) -> Poly:
    """{p, q} = sum c^k_ij x_k d_i(p) d_j(q); on generators this gives
    {x_i, x_j} = sum_k c^k_ij x_k."""
    g = p.ambient
    if q.ambient != g:
        raise AlgebraError("ambient algebra mismatch")
    out = Poly.zero(g)
    diffs_p = {i: p.diff(i) for i in range(g.dim)}
    diffs_q = {j: q.diff(j) for j in range(g.dim)}
    for i in range(g.dim):
        if diffs_p[i].is_zero():
            continue
        for j in range(g.dim):
            if diffs_q[j].is_zero():
                continue
            row = g.bracket(i, j)
            if not row:
                continue
            pi_ij = Poly(g, {(tuple(1 if m == k else 0 for m in range(g.dim)), 0): c
                             for k, c in row.items()})
            out = out + pi_ij * diffs_p[i] * diffs_q[j]
    return out


def scale_map(p: Poly, t: Fraction) -> Poly:
    """The algebra morphism x_i -> x_i / t (constants and eps untouched)."""
    t = Fraction(t)
    if t == 0:
        raise AlgebraError("scale_map needs t != 0")
    terms = {}
    for (e, pw), c in p.terms.items():
        terms[(e, pw)] = c / t ** sum(e)
    return Poly(p.ambient, terms)


def homogenize(f: Poly, split: SplitData, N: int) -> Poly:
    """Spread the deg_q-homogeneous parts of f over eps powers so the result
    is homogeneous of total degree N in (deg_q + deg_eps)."""
    if f.deg_eps() != 0:
        raise AlgebraError("homogenize input must be eps-free")
    if not f.uses_only(split.q_indices()):
        raise AlgebraError("homogenize input must lie in S(q)")
    d = f.deg_q(split)
    if N < d:
        raise AlgebraError(f"N={N} is below deg_q={d}")
    t = split.t
    terms = {}
    for (e, _), c in f.terms.items():
        k = sum(e[t:])
        terms[(e, N - k)] = c
    return Poly(f.ambient, terms)


def dehomogenize(f: Poly) -> Poly:
    """Set eps = 1."""
    return f.substitute_eps(Fraction(1))


def moyal_product(f: Poly, g: Poly, pi: list[list[Fraction]],
                  order: int | None = None) -> Poly:
    """Moyal series for a constant antisymmetric matrix pi, truncated at
    eps^order; exact for polynomials once order >= deg f + deg g."""
    amb = f.ambient
    if g.ambient != amb:
        raise AlgebraError("ambient algebra mismatch")
    n = amb.dim
    for i in range(n):
        for j in range(n):
            if pi[i][j] != -pi[j][i]:
                raise AlgebraError("pi must be antisymmetric")
    if order is None:
        order = f.total_deg() + g.total_deg()
    if order < 0:
        raise AlgebraError("order must be nonnegative")
    out = f * g
    # left[i] = d_i f, refreshed per series level
    left = {(): f}
    right = {(): g}
    for level in range(1, order + 1):
        new_left: dict[tuple[int, ...], Poly] = {}
        new_right: dict[tuple[int, ...], Poly] = {}
        for key, p in left.items():
            for i in range(n):
                d = p.diff(i)
                if not d.is_zero():
                    new_left[key + (i,)] = d
        for key, p in right.items():
            for j in range(n):
                d = p.diff(j)
                if not d.is_zero():
                    new_right[key + (j,)] = d
        if not new_left or not new_right:
            break
        coeff = Fraction(1, factorial(level))
        level_sum = Poly.zero(amb)
        for ikey, dpf in new_left.items():
            for jkey, dqg in new_right.items():
                w = Fraction(1)
                for a, b in zip(ikey, jkey):
                    w *= pi[a][b]
                    if w == 0:
                        break
                if w == 0:
                    continue
                level_sum = level_sum + (dpf * dqg).scale(w)
        if not level_sum.is_zero():
            out = out + Poly.eps(amb, level) * level_sum.scale(coeff)
        left, right = new_left, new_right
    return out
