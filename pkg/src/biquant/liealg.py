"""Finite-dimensional Lie algebras over the rationals, given by structure constants.

An algebra is specified by a basis e_1..e_n and the sparse table
[e_i, e_j] = sum_k c^k_ij e_k with exact rational c^k_ij.  A split fixes a
subalgebra h spanned by the *first* t basis vectors, a supplement q spanned
by the rest, and a character lambda on h; every other module keys off this
ordering convention.  All objects here are immutable after construction and
all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable


class AlgebraError(Exception):
    """Structural problem with an algebra, split, or input file."""


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q' or an integer literal into an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise AlgebraError(f"not a rational number: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    """Canonical 'p/q' with q > 0 and gcd(p, q) = 1, or plain integer."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants stored sparsely; indices are 0-based internally."""

    dim: int
    labels: tuple[str, ...]
    # (i, j) -> {k: c^k_ij}, antisymmetrically complete, no zero entries
    brackets: tuple[tuple[tuple[int, int], tuple[tuple[int, Fraction], ...]], ...]
    _table: dict = field(default_factory=dict, repr=False, compare=False, hash=False)

    def __post_init__(self):
        table = {ij: dict(row) for ij, row in self.brackets}
        object.__setattr__(self, "_table", table)

    def bracket(self, i: int, j: int) -> dict[int, Fraction]:
        """Coordinates of [e_i, e_j] as a sparse {k: coefficient} map."""
        return self._table.get((i, j), {})

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        return self._table.get((i, j), {}).get(k, Fraction(0))

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise AlgebraError(f"unknown basis label {label!r}")


def make_algebra(dim: int, labels: Iterable[str] | None,
                 brackets: dict[tuple[int, int], dict[int, Fraction]]) -> LieAlgebra:
    """Build a LieAlgebra from one-sided bracket data; the antisymmetric
    partner of every declared bracket is filled in automatically."""
    if dim <= 0:
        raise AlgebraError("dim must be a positive integer")
    if labels is None:
        labels = tuple(f"e{i+1}" for i in range(dim))
    else:
        labels = tuple(labels)
        if len(labels) != dim:
            raise AlgebraError(f"expected {dim} basis labels, got {len(labels)}")
    full: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (i, j), row in brackets.items():
        for idx in (i, j, *row):
            if not 0 <= idx < dim:
                raise AlgebraError(f"basis index {idx + 1} out of range for dim {dim}")
        row = {k: Fraction(v) for k, v in row.items() if v != 0}
        if not row:
            continue
        if (i, j) in full and full[(i, j)] != row:
            raise AlgebraError(
                f"inconsistent duplicate declaration for [{labels[i]},{labels[j]}]")
        neg = {k: -v for k, v in row.items()}
        if (j, i) in full and full[(j, i)] != neg:
            raise AlgebraError(
                f"brackets [{labels[i]},{labels[j]}] and [{labels[j]},{labels[i]}] "
                "are not antisymmetric partners")
        if i == j and row:
            raise AlgebraError(f"[{labels[i]},{labels[i]}] must vanish")
        full[(i, j)] = row
        full[(j, i)] = neg
    packed = tuple(sorted(
        (ij, tuple(sorted(row.items()))) for ij, row in full.items()))
    return LieAlgebra(dim=dim, labels=labels, brackets=packed)


@dataclass(frozen=True)
class Violation:
    kind: str              # "antisymmetry" | "jacobi"
    indices: tuple[int, ...]
    residual: Fraction

    def __str__(self):
        idx = ",".join(str(i + 1) for i in self.indices)
        return f"{self.kind}({idx}) residual={format_rational(self.residual)}"


def validate(g: LieAlgebra) -> list[Violation]:
    """All antisymmetry and Jacobi violations, in exact arithmetic.

    Empty list iff the structure constants define a Lie algebra.
    """
    out: list[Violation] = []
    n = g.dim
    for i in range(n):
        for j in range(n):
            row_ij = g.bracket(i, j)
            row_ji = g.bracket(j, i)
            for k in set(row_ij) | set(row_ji):
                r = row_ij.get(k, Fraction(0)) + row_ji.get(k, Fraction(0))
                if r != 0 and i <= j:
                    out.append(Violation("antisymmetry", (i, j, k), r))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                # [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]
                acc: dict[int, Fraction] = {}
                for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                    for m, cm in g.bracket(a, b).items():
                        for l, cl in g.bracket(m, c).items():
                            acc[l] = acc.get(l, Fraction(0)) + cm * cl
                for l, r in sorted(acc.items()):
                    if r != 0:
                        out.append(Violation("jacobi", (i, j, k, l), r))
    return out


def adjoint_matrix(g: LieAlgebra, i: int) -> list[list[Fraction]]:
    """Matrix of ad_{e_i}; column j holds the coordinates of [e_i, e_j]."""
    n = g.dim
    mat = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        for k, c in g.bracket(i, j).items():
            mat[k][j] = c
    return mat


@dataclass(frozen=True)
class SplitData:
    """A choice g = h + q with h = span(e_1..e_t), plus a character on h.

    ``generator_table`` is only populated on centrally extended algebras: it
    lists pairs (i, c) meaning the reduction ideal is generated by
    e_i + c * T instead of e_i + scalar, with T the central variable.
    """

    algebra: LieAlgebra
    t: int
    lam: tuple[Fraction, ...]
    generator_table: tuple[tuple[int, Fraction], ...] = ()
    t_index: int | None = None

    def __post_init__(self):
        problems = check_split(self.algebra, self.t, self.lam)
        if problems:
            raise AlgebraError("; ".join(problems))

    @property
    def r(self) -> int:
        return self.algebra.dim - self.t

    def q_indices(self) -> range:
        return range(self.t, self.algebra.dim)

    def h_indices(self) -> range:
        return range(self.t)


def check_split(g: LieAlgebra, t: int, lam: tuple[Fraction, ...]) -> list[str]:
    problems = []
    if not 0 <= t <= g.dim:
        return [f"h dimension {t} out of range"]
    if len(lam) != t:
        problems.append(f"character needs {t} values, got {len(lam)}")
        return problems
    for i in range(t):
        for j in range(t):
            for k, c in g.bracket(i, j).items():
                if k >= t and c != 0:
                    problems.append(
                        f"h is not a subalgebra: [{g.labels[i]},{g.labels[j]}] "
                        f"has a component on {g.labels[k]}")
    for i in range(t):
        for j in range(t):
            s = Fraction(0)
            for k, c in g.bracket(i, j).items():
                if k < t:
                    s += c * lam[k]
            if s != 0:
                problems.append(
                    f"lambda is not a character: lambda([{g.labels[i]},{g.labels[j]}]) "
                    f"= {format_rational(s)}")
    return sorted(set(problems))


def rho(s: SplitData) -> tuple[Fraction, ...]:
    """rho_i = -(1/2) Tr ad(e_i) for each h-basis vector, exact."""
    g = s.algebra
    out = []
    for i in range(s.t):
        tr = sum((g.bracket(i, j).get(j, Fraction(0)) for j in range(g.dim)),
                 Fraction(0))
        out.append(-tr / 2)
    return tuple(out)


def extend_central(s: SplitData) -> tuple[LieAlgebra, SplitData]:
    """Adjoin a central variable T and trade the scalar character for the
    T-coupling: the new split has h_T = h + <T>, zero character, and a
    generator table recording the ideal generators e_i + lambda_i * T."""
    g = s.algebra
    t, n = s.t, g.dim
    labels = g.labels[:t] + ("T",) + g.labels[t:]

    def shift(i: int) -> int:
        return i if i < t else i + 1

    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (i, j), row in g._table.items():
        brackets[(shift(i), shift(j))] = {shift(k): c for k, c in row.items()}
    g_T = make_algebra(n + 1, labels, brackets)
    table = tuple((i, s.lam[i]) for i in range(t))
    s_T = SplitData(algebra=g_T, t=t + 1, lam=(Fraction(0),) * (t + 1),
                    generator_table=table, t_index=t)
    return g_T, s_T


# ---------------------------------------------------------------------------
# Line-oriented text format.
#
#   dim 3
#   basis H X Y        # optional, defaults e1..en
#   h 1
#   lambda 1/2
#   bracket H X = 1 X  # RHS: list of "coeff basisname" pairs
# ---------------------------------------------------------------------------

def parse_algebra(text: str) -> LieAlgebra:
    """Parse the file format; validates structure, not the Jacobi identity."""
    g, _ = parse_algebra_and_split(text)
    return g


def parse_algebra_and_split(text: str) -> tuple[LieAlgebra, SplitData | None]:
    dim = None
    labels: list[str] | None = None
    t = None
    lam: list[Fraction] | None = None
    declared: dict[tuple[int, int], dict[int, Fraction]] = {}

    def err(lineno: int, msg: str):
        raise AlgebraError(f"line {lineno}: {msg}")

    def label_index(lineno: int, name: str) -> int:
        if name.isdigit():
            idx = int(name) - 1
        else:
            try:
                idx = labels.index(name)
            except ValueError:
                err(lineno, f"unknown basis name {name!r}")
        if not 0 <= idx < dim:
            err(lineno, f"basis index {name} out of range for dim {dim}")
        return idx

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0]
        if key == "dim":
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) <= 0:
                err(lineno, "dim expects one positive integer")
            dim = int(parts[1])
            if labels is None:
                labels = [f"e{i+1}" for i in range(dim)]
        elif key == "basis":
            if dim is None:
                err(lineno, "basis before dim")
            if len(parts) != dim + 1:
                err(lineno, f"expected {dim} basis names")
            if len(set(parts[1:])) != dim:
                err(lineno, "duplicate basis names")
            labels = parts[1:]
        elif key == "h":
            if dim is None:
                err(lineno, "h before dim")
            if len(parts) != 2 or not parts[1].isdigit():
                err(lineno, "h expects one integer")
            t = int(parts[1])
            if not 0 <= t <= dim:
                err(lineno, f"h dimension {t} out of range")
        elif key == "lambda":
            if t is None:
                err(lineno, "lambda before h")
            if len(parts) != t + 1:
                err(lineno, f"lambda expects {t} rationals")
            try:
                lam = [parse_rational(p) for p in parts[1:]]
            except AlgebraError as exc:
                err(lineno, str(exc))
        elif key == "bracket":
            if dim is None:
                err(lineno, "bracket before dim")
            if "=" not in parts:
                err(lineno, "bracket line needs '='")
            eq = parts.index("=")
            if eq != 3:
                err(lineno, "bracket expects exactly two basis names before '='")
            i = label_index(lineno, parts[1])
            j = label_index(lineno, parts[2])
            rhs = parts[eq + 1:]
            if len(rhs) % 2 != 0:
                err(lineno, "bracket RHS must be 'coeff name' pairs")
            row: dict[int, Fraction] = {}
            for c_txt, name in zip(rhs[::2], rhs[1::2]):
                try:
                    c = parse_rational(c_txt)
                except AlgebraError as exc:
                    err(lineno, str(exc))
                k = label_index(lineno, name)
                row[k] = row.get(k, Fraction(0)) + c
            row = {k: c for k, c in row.items() if c != 0}
            if i == j and row:
                err(lineno, f"[{parts[1]},{parts[1]}] must be zero")
            for (a, b), prev in ((p, declared[p]) for p in ((i, j), (j, i))
                                 if p in declared):
                want = row if (a, b) == (i, j) else {k: -c for k, c in row.items()}
                if prev != want:
                    err(lineno, f"bracket [{parts[1]},{parts[2]}] contradicts an "
                                "earlier declaration")
            declared[(i, j)] = row
            declared[(j, i)] = {k: -c for k, c in row.items()}
        else:
            err(lineno, f"unknown directive {key!r}")

    if dim is None:
        raise AlgebraError("missing 'dim' line")
    one_sided = {(i, j): row for (i, j), row in declared.items() if i < j or
                 (i > j and (j, i) not in declared)}
    g = make_algebra(dim, labels, one_sided)
    split = None
    if t is not None:
        lam_t = tuple(lam) if lam is not None else (Fraction(0),) * t
        if len(lam_t) != t:
            raise AlgebraError(f"lambda expects {t} rationals")
        split = SplitData(algebra=g, t=t, lam=lam_t)
    return g, split


def parse_algebra_file(path: str) -> tuple[LieAlgebra, SplitData | None]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_algebra_and_split(fh.read())


# ---------------------------------------------------------------------------
# Desk-scale test algebras.
# ---------------------------------------------------------------------------

def aff1(lam: Fraction | int = 0) -> SplitData:
    """[H, X] = X with h = <H>."""
    g = make_algebra(2, ("H", "X"), {(0, 1): {1: Fraction(1)}})
    return SplitData(g, 1, (Fraction(lam),))


def sl2_cartan(lam: Fraction | int = 0) -> SplitData:
    """sl2 with basis (H, E, F), h the Cartan <H>."""
    g = make_algebra(3, ("H", "E", "F"), {
        (0, 1): {1: Fraction(2)},
        (0, 2): {2: Fraction(-2)},
        (1, 2): {0: Fraction(1)},
    })
    return SplitData(g, 1, (Fraction(lam),))


def sl2_borel(lam_h: Fraction | int = 0) -> SplitData:
    """sl2 with basis (H, E, F), h the Borel <H, E>; lambda(E) = 0 forced."""
    g = make_algebra(3, ("H", "E", "F"), {
        (0, 1): {1: Fraction(2)},
        (0, 2): {2: Fraction(-2)},
        (1, 2): {0: Fraction(1)},
    })
    return SplitData(g, 2, (Fraction(lam_h), Fraction(0)))


def heisenberg_center(lam: Fraction | int = 0) -> SplitData:
    """Heisenberg [X, Y] = Z with h the center <Z>; basis order (Z, X, Y)."""
    g = make_algebra(3, ("Z", "X", "Y"), {(1, 2): {0: Fraction(1)}})
    return SplitData(g, 1, (Fraction(lam),))


def heisenberg_x(lam: Fraction | int = 0) -> SplitData:
    """Heisenberg with h = <X>; basis order (X, Y, Z), [X, Y] = Z."""
    g = make_algebra(3, ("X", "Y", "Z"), {(0, 1): {2: Fraction(1)}})
    return SplitData(g, 1, (Fraction(lam),))


def abelian(n: int = 2, t: int = 1) -> SplitData:
    g = make_algebra(n, None, {})
    return SplitData(g, t, (Fraction(0),) * t)
