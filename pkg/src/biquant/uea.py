"""Deformed universal enveloping algebra calculus.

Monomials are PBW-normal words with all q-letters before all h-letters, each
block by increasing basis index; the generator relation is
X*Y - Y*X = eps*[X, Y].  Setting eps = 1 recovers U(g), eps = 0 recovers S(g).

The left reduction ideal is generated by H + shift(H) for H in h, where the
shift is (lambda + rho)(H) by default, optionally scaled by eps, and on a
central extension may be a multiple of the central variable T instead of a
scalar.  Since monomials end with their h-letters, reduction against the left
ideal is trailing-letter rewriting and is idempotent.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb, factorial

from .liealg import AlgebraError, SplitData, rho
from .poly import Mono, Poly
from . import linalg

Word = tuple[int, ...]


class UEA:
    """Computation context: one split, one reduction-shift convention."""

    def __init__(self, split: SplitData, scale_character_by_eps: bool = False,
                 shifts: tuple[tuple[Fraction, Fraction], ...] | None = None):
        self.split = split
        self.algebra = split.algebra
        self.scale_character_by_eps = scale_character_by_eps
        if shifts is None:
            r = rho(split)
            shifts = tuple((split.lam[i] + r[i], Fraction(0)) for i in range(split.t))
        # shifts[i] = (scalar, t_coeff): generator is H_i + scalar + t_coeff * T
        self.shifts = shifts
        self.t_index = split.t_index
        self._nf_cache: dict[Word, dict[Mono, Fraction]] = {}

    # letters sort with q-block first, then h-block
    def rank(self, letter: int) -> tuple[int, int]:
        return (0, letter) if letter >= self.split.t else (1, letter)

    def word_of(self, exps: tuple[int, ...]) -> Word:
        t = self.split.t
        order = list(range(t, len(exps))) + list(range(t))
        return tuple(i for i in order for _ in range(exps[i]))

    def elem(self, terms: dict[Mono, Fraction] | None = None) -> "UEAElem":
        return UEAElem(self, terms)

    def generator(self, i: int) -> "UEAElem":
        e = [0] * self.algebra.dim
        e[i] = 1
        return self.elem({(tuple(e), 0): Fraction(1)})

    def one(self) -> "UEAElem":
        return self.elem({((0,) * self.algebra.dim, 0): Fraction(1)})

    def from_poly(self, p: Poly) -> "UEAElem":
        """Reinterpret a polynomial's monomials as PBW-normal words."""
        return self.elem(dict(p.terms))

    # -- normal form ---------------------------------------------------------

    def normal_form(self, word: Word) -> dict[Mono, Fraction]:
        cached = self._nf_cache.get(word)
        if cached is not None:
            return cached
        bad = None
        for i in range(len(word) - 1):
            if self.rank(word[i]) > self.rank(word[i + 1]):
                bad = i
                break
        if bad is None:
            exps = [0] * self.algebra.dim
            for letter in word:
                exps[letter] += 1
            result = {(tuple(exps), 0): Fraction(1)}
        else:
            a, b = word[bad], word[bad + 1]
            swapped = word[:bad] + (b, a) + word[bad + 2:]
            result = dict(self.normal_form(swapped))
            for k, c in self.algebra.bracket(a, b).items():
                sub = self.normal_form(word[:bad] + (k,) + word[bad + 2:])
                for (e, p), v in sub.items():
                    key = (e, p + 1)
                    s = result.get(key, Fraction(0)) + c * v
                    if s == 0:
                        result.pop(key, None)
                    else:
                        result[key] = s
        self._nf_cache[word] = result
        return result


class UEAElem:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: UEA, terms: dict[Mono, Fraction] | None = None):
        self.ctx = ctx
        self.terms: dict[Mono, Fraction] = {}
        if terms:
            for key, c in terms.items():
                if c != 0:
                    self.terms[key] = Fraction(c)

    def _check(self, other: "UEAElem"):
        if other.ctx is not self.ctx:
            raise AlgebraError("enveloping-algebra context mismatch")

    def __add__(self, other):
        if not isinstance(other, UEAElem):
            other = self.ctx.one().scale(other)
        self._check(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            s = terms.get(key, Fraction(0)) + c
            if s == 0:
                terms.pop(key, None)
            else:
                terms[key] = s
        return UEAElem(self.ctx, terms)

    def __sub__(self, other):
        if not isinstance(other, UEAElem):
            other = self.ctx.one().scale(other)
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "UEAElem":
        c = Fraction(c)
        return UEAElem(self.ctx, {k: v * c for k, v in self.terms.items()} if c else {})

    def __mul__(self, other) -> "UEAElem":
        if not isinstance(other, UEAElem):
            return self.scale(other)
        return uea_mul(self, other)

    def __eq__(self, other):
        if isinstance(other, UEAElem):
            return self.ctx is other.ctx and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def deg_q(self) -> int:
        t = self.ctx.split.t
        return max((sum(e[t:]) for (e, _) in self.terms), default=0)

    def deg_eps(self) -> int:
        return max((p for (_, p) in self.terms), default=0)

    def has_h_letters(self) -> bool:
        t, ti = self.ctx.split.t, self.ctx.t_index
        return any(any(e[i] for i in range(t) if i != ti) for (e, _) in self.terms)

    def to_poly(self) -> Poly:
        return Poly(self.ctx.algebra, dict(self.terms))

    def substitute_eps(self, value) -> "UEAElem":
        return self.ctx.from_poly(self.to_poly().substitute_eps(value))

    def render(self) -> str:
        """PBW-order rendering; shares the polynomial conventions."""
        if not self.terms:
            return "0"
        labels = self.ctx.algebra.labels
        t = self.ctx.split.t
        order = list(range(t, len(labels))) + list(range(t))
        from .liealg import format_rational
        chunks = []
        for (e, p), c in sorted(self.terms.items()):
            factors = [format_rational(c)]
            for i in order:
                if e[i] == 1:
                    factors.append(labels[i])
                elif e[i] > 1:
                    factors.append(f"{labels[i]}^{e[i]}")
            if p == 1:
                factors.append("eps")
            elif p > 1:
                factors.append(f"eps^{p}")
            chunks.append("*".join(factors))
        return " + ".join(chunks)

    def __repr__(self):
        return f"UEAElem({self.render()})"


def uea_mul(a: UEAElem, b: UEAElem) -> UEAElem:
    """PBW normal form of the product."""
    a._check(b)
    ctx = a.ctx
    out: dict[Mono, Fraction] = {}
    for (e1, p1), c1 in a.terms.items():
        w1 = ctx.word_of(e1)
        for (e2, p2), c2 in b.terms.items():
            w2 = ctx.word_of(e2)
            for (e, p), v in ctx.normal_form(w1 + w2).items():
                key = (e, p + p1 + p2)
                s = out.get(key, Fraction(0)) + c1 * c2 * v
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
    return UEAElem(ctx, out)


def symmetrize(ctx: UEA, p: Poly) -> UEAElem:
    """PBW symmetrization: beta(x_{i1}...x_{ik}) averages the k! orderings;
    eps exponents pass through."""
    out = ctx.elem()
    for (e, pw), c in p.terms.items():
        word = tuple(i for i in range(len(e)) for _ in range(e[i]))
        k = len(word)
        if k == 0:
            out = out + ctx.elem({(e, pw): c})
            continue
        mult = Fraction(1, factorial(k))
        acc: dict[Mono, Fraction] = {}
        for perm in set(permutations(word)):
            reps = 1
            for i in set(perm):
                reps *= factorial(perm.count(i))
            for (ee, qq), v in ctx.normal_form(perm).items():
                key = (ee, qq + pw)
                acc[key] = acc.get(key, Fraction(0)) + v * reps
        out = out + ctx.elem({k2: v * mult * c for k2, v in acc.items()})
    return out


def ideal_reduce(a: UEAElem) -> UEAElem:
    """Unique representative of a modulo the left ideal generated by the
    shifted h-generators, supported on q-monomials only."""
    ctx = a.ctx
    t, ti = ctx.split.t, ctx.t_index
    reducible = [i for i in range(t) if i != ti]
    pending = dict(a.terms)
    done: dict[Mono, Fraction] = {}
    while pending:
        (e, p), c = pending.popitem()
        js = [i for i in reducible if e[i] > 0]
        if not js:
            s = done.get((e, p), Fraction(0)) + c
            if s == 0:
                done.pop((e, p), None)
            else:
                done[(e, p)] = s
            continue
        j = max(js)   # trailing reducible letter (T, if present, is central)
        scalar, t_coeff = ctx.shifts[j]
        e2 = list(e)
        e2[j] -= 1
        p2 = p + 1 if ctx.scale_character_by_eps else p
        for key, v in _shift_image(ctx, tuple(e2), p2, scalar, t_coeff):
            s = pending.get(key, Fraction(0)) + (-c) * v
            if s == 0:
                pending.pop(key, None)
            else:
                pending[key] = s
    return UEAElem(ctx, done)


def _shift_image(ctx: UEA, exps: tuple[int, ...], p: int,
                 scalar: Fraction, t_coeff: Fraction):
    out = []
    if scalar != 0:
        out.append(((exps, p), scalar))
    if t_coeff != 0:
        if ctx.t_index is None:
            raise AlgebraError("generator table refers to T but no t_index is set")
        e2 = list(exps)
        e2[ctx.t_index] += 1   # T is central, position is immaterial
        out.append((((tuple(e2)), p), t_coeff))
    return out


def adjoint_action(i: int, a: UEAElem) -> UEAElem:
    """h-action [H_i, -] in the deformed algebra; carries an overall eps."""
    if i >= a.ctx.split.t:
        raise AlgebraError("adjoint_action index must lie in h")
    h = a.ctx.generator(i)
    return uea_mul(h, a) - uea_mul(a, h)


def q_monomials(split: SplitData, max_deg: int, include_t: bool = True):
    """All q-block exponent vectors of q-degree <= max_deg, sorted."""
    n, t = split.algebra.dim, split.t
    idx = [i for i in range(t, n)]
    if not include_t and split.t_index is not None:
        idx = [i for i in idx if i != split.t_index]
    out = []

    def rec(pos: int, remaining: int, acc: list[int]):
        if pos == len(idx):
            e = [0] * n
            for k, i in enumerate(idx):
                e[i] = acc[k]
            out.append(tuple(e))
            return
        for d in range(remaining + 1):
            rec(pos + 1, remaining - d, acc + [d])

    rec(0, max_deg, [])
    return sorted(out)


def invariants_basis(ctx: UEA, D: int, N: int) -> list[UEAElem]:
    """Echelonized basis of the h-invariants of the reduced quotient, inside
    the span of q-monomials of degree <= D and eps order <= N.

    Invariance of a is the exact condition ideal_reduce(adjoint_action(i, a))
    = 0 for every h-generator; the constraint rows keep all eps powers the
    computation produces.
    """
    split = ctx.split
    monos = q_monomials(split, D)
    cols = [(e, m) for e in monos for m in range(N + 1)]
    col_index = {key: k for k, key in enumerate(cols)}
    rows_map: dict[tuple[int, Mono], dict[int, Fraction]] = {}
    reducible = [i for i in range(split.t) if i != ctx.t_index]
    for k, (e, m) in enumerate(cols):
        v = ctx.elem({(e, m): Fraction(1)})
        for i in reducible:
            img = ideal_reduce(adjoint_action(i, v))
            for mono, c in img.terms.items():
                rows_map.setdefault((i, mono), {})[k] = c
    mat = []
    for key in sorted(rows_map):
        row = [Fraction(0)] * len(cols)
        for k, c in rows_map[key].items():
            row[k] = c
        mat.append(row)
    kernel = linalg.rational_nullspace(mat, len(cols))
    out = []
    for vec in kernel:
        terms = {cols[k]: c for k, c in enumerate(vec) if c != 0}
        out.append(ctx.elem(terms))
    return out


# ---------------------------------------------------------------------------
# The determinant series q(Y) = det(sinh(ad Y / 2) / (ad Y / 2)) and the
# constant-coefficient operator cut from its square root.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _log_sinhc_half_coeffs(max_deg: int) -> tuple[Fraction, ...]:
    """Taylor coefficients of log(sinh(x/2)/(x/2)) up to x^max_deg, exact."""
    a = [Fraction(0)] * (max_deg + 1)
    for m in range(0, max_deg + 1, 2):
        a[m] = Fraction(1, 2 ** m * factorial(m + 1))
    # log(1 + u) with u = a - 1; compose power series
    u = list(a)
    u[0] = Fraction(0)
    out = [Fraction(0)] * (max_deg + 1)
    power = [Fraction(1)] + [Fraction(0)] * max_deg   # u^k, iteratively
    for k in range(1, max_deg + 1):
        nxt = [Fraction(0)] * (max_deg + 1)
        for i, ci in enumerate(power):
            if ci == 0:
                continue
            for j, cj in enumerate(u):
                if cj == 0 or i + j > max_deg:
                    continue
                nxt[i + j] += ci * cj
        power = nxt
        if all(c == 0 for c in power):
            break
        sign = Fraction((-1) ** (k + 1), k)
        for m in range(max_deg + 1):
            out[m] += sign * power[m]
    return tuple(out)


def _truncate(p: Poly, D: int) -> Poly:
    return Poly(p.ambient, {key: c for key, c in p.terms.items()
                            if sum(key[0]) <= D})


def q_function_expansion(split: SplitData, D: int) -> Poly:
    """Truncation to total degree <= D of q(Y) in the coordinates of Y.

    Computed as exp(sum_m l_m Tr(ad_Y^m)) with l_m the exact Taylor
    coefficients of log(sinh(x/2)/(x/2)); no linear term exists, so the
    series starts at degree 2.
    """
    g = split.algebra
    one = Poly.constant(g, 1)
    if D < 2:
        return one
    from .liealg import adjoint_matrix
    n = g.dim
    ad = [adjoint_matrix(g, i) for i in range(n)]
    coord = [Poly.coordinate(g, i) for i in range(n)]
    M = [[sum((coord[i].scale(ad[i][a][b]) for i in range(n)), Poly.zero(g))
          for b in range(n)] for a in range(n)]
    lcoef = _log_sinhc_half_coeffs(D)
    logq = Poly.zero(g)
    power = [[one if a == b else Poly.zero(g) for b in range(n)] for a in range(n)]
    for m in range(1, D + 1):
        power = [[_truncate(sum((power[a][k] * M[k][b] for k in range(n)),
                                Poly.zero(g)), D)
                  for b in range(n)] for a in range(n)]
        if lcoef[m] != 0:
            tr = sum((power[a][a] for a in range(n)), Poly.zero(g))
            logq = logq + tr.scale(lcoef[m])
    q = one
    term = one
    for k in range(1, D // 2 + 1):
        term = _truncate(term * logq, D).scale(Fraction(1, k))
        if term.is_zero():
            break
        q = q + term
    return q


def poly_sqrt(p: Poly, D: int) -> Poly:
    """(1 + u)^(1/2) with u = p - 1 of positive valuation, truncated at D."""
    g = p.ambient
    one = Poly.constant(g, 1)
    u = p - one
    out = one
    power = one
    for k in range(1, D + 1):
        power = _truncate(power * u, D)
        if power.is_zero():
            break
        c = Fraction(comb(2 * k, k), (1 - 2 * k) * (-4) ** k)  # binom(1/2, k)
        out = out + power.scale(c)
    return out


def duflo_partial(f: Poly, split: SplitData, which: str = "q_half") -> Poly:
    """Apply the constant-coefficient operator obtained from q(Y)^(1/2) by
    x_i -> d/dx_i; with which='q_eps_half' every degree-d piece of the symbol
    also carries eps^d (the q(eps Y) convention)."""
    if which not in ("q_half", "q_eps_half"):
        raise AlgebraError(f"unknown Duflo variant {which!r}")
    D = f.total_deg()
    symbol = poly_sqrt(q_function_expansion(split, D), D)
    g = f.ambient
    out = Poly.zero(g)
    for (e, _), c in symbol.terms.items():
        piece = f
        for i, k in enumerate(e):
            for _ in range(k):
                piece = piece.diff(i)
                if piece.is_zero():
                    break
        if piece.is_zero():
            continue
        if which == "q_eps_half":
            piece = piece * Poly.eps(g, sum(e)) if sum(e) else piece
        out = out + piece.scale(c)
    return out
