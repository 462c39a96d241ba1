"""Finitely generated abelian groups in exact integer arithmetic.

Everything in this package ultimately rests on the Smith normal form of an
integer matrix: cokernels give invariant-factor presentations of quotient
groups, kernels give saturated bases of relation spaces, and the n-torsion
construction carves out the subgroup killed by n.  There are no floats
anywhere.  Matrices are immutable tuples of Python ints, group coordinates
are exact, and circle-valued quantities are Fractions reduced mod 1.

>>> m = IntegerMatrix.from_rows([[2, 0], [0, 3]])
>>> cokernel(m)
FGAbelianGroup(free_rank=0, torsion=(6,))

The diagonal (2, 3) is not in Smith form; the unique invariant-factor
chain for that quotient is Z/6.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterator, Sequence

__all__ = [
    "IntegerMatrix",
    "FGAbelianGroup",
    "GroupElement",
    "CircleValue",
    "GroupHom",
    "CokernelPresentation",
    "smith_normal_form",
    "cokernel",
    "cokernel_presentation",
    "kernel_basis",
    "n_torsion",
    "FormalSum",
]


@dataclass(frozen=True)
class IntegerMatrix:
    """Immutable integer matrix with entries stored row-major.

    >>> m = IntegerMatrix.from_rows([[1, 2], [3, 4]])
    >>> m.entry(1, 0)
    3
    >>> (m @ IntegerMatrix.identity(2)) == m
    True
    """

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")
        for e in self.entries:
            if not isinstance(e, int):
                raise ValueError("entries must be Python ints")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntegerMatrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        flat: list[int] = []
        for row in rows:
            if len(row) != nc:
                raise ValueError("ragged rows")
            flat.extend(int(x) for x in row)
        return cls(nr, nc, tuple(flat))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int | None = None) -> "IntegerMatrix":
        nc = len(columns)
        if rows is None:
            if nc == 0:
                raise ValueError("need an explicit row count for an empty column list")
            rows = len(columns[0])
        for col in columns:
            if len(col) != rows:
                raise ValueError("ragged columns")
        flat = [int(columns[j][i]) for i in range(rows) for j in range(nc)]
        return cls(rows, nc, tuple(flat))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.row(i) for i in range(self.rows))

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(
            self.cols,
            self.rows,
            tuple(self.entry(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions do not match")
        flat: list[int] = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                flat.append(sum(ri[k] * other.entry(k, j) for k in range(self.cols)))
        return IntegerMatrix(self.rows, other.cols, tuple(flat))

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        if len(vector) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(
            sum(self.entry(i, k) * vector[k] for k in range(self.cols))
            for i in range(self.rows)
        )

    def determinant(self) -> int:
        """Exact determinant by the Bareiss fraction-free elimination.

        >>> IntegerMatrix.from_rows([[2, 1], [7, 4]]).determinant()
        1
        """
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(r) for r in self.to_rows()]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


def smith_normal_form(m: IntegerMatrix) -> tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
    """Diagonalize an integer matrix by unimodular row and column moves.

    Returns (u, s, v) with s = u @ m @ v, u and v unimodular, s diagonal
    with nonnegative entries forming a divisibility chain d1 | d2 | ... .
    Total on every input, including empty and zero matrices.

    >>> m = IntegerMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    >>> u, s, v = smith_normal_form(m)
    >>> s.to_rows()
    ((2, 0, 0), (0, 6, 0), (0, 0, 12))
    >>> (u @ m @ v) == s
    True
    """
    nr, nc = m.rows, m.cols
    a = [list(r) for r in m.to_rows()]
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def add_row(dst: int, src: int, c: int) -> None:
        # row dst += c * row src, mirrored into u
        adst, asrc = a[dst], a[src]
        for j in range(nc):
            adst[j] += c * asrc[j]
        udst, usrc = u[dst], u[src]
        for j in range(nr):
            udst[j] += c * usrc[j]

    def add_col(dst: int, src: int, c: int) -> None:
        for i in range(nr):
            a[i][dst] += c * a[i][src]
        for i in range(nc):
            v[i][dst] += c * v[i][src]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def negate_row(i: int) -> None:
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    for t in range(min(nr, nc)):
        # pivot: a nonzero entry of least magnitude in the trailing block
        pivot = None
        best = 0
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x != 0 and (pivot is None or abs(x) < best):
                    pivot, best = (i, j), abs(x)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        if a[t][t] < 0:
            negate_row(t)
        while True:
            i = next((i for i in range(t + 1, nr) if a[i][t]), None)
            if i is not None:
                add_row(i, t, -(a[i][t] // a[t][t]))
                if a[i][t]:
                    # the remainder is a strictly smaller positive pivot
                    swap_rows(i, t)
                continue
            j = next((j for j in range(t + 1, nc) if a[t][j]), None)
            if j is not None:
                add_col(j, t, -(a[t][j] // a[t][t]))
                if a[t][j]:
                    swap_cols(j, t)
                continue
            d = a[t][t]
            culprit = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % d),
                None,
            )
            if culprit is None:
                break
            # pull a non-divisible row up so the pivot absorbs its gcd
            add_row(t, culprit, 1)

    return (
        IntegerMatrix.from_rows(u) if nr else IntegerMatrix(0, 0, ()),
        IntegerMatrix(nr, nc, tuple(x for row in a for x in row)),
        IntegerMatrix.from_rows(v) if nc else IntegerMatrix(0, 0, ()),
    )


@dataclass(frozen=True)
class FGAbelianGroup:
    """A finitely generated abelian group in invariant-factor form.

    The group is Z^free_rank plus a cyclic factor Z/d for each entry of
    ``torsion``, where the entries satisfy 2 <= d1 | d2 | ... .  Elements
    carry one coordinate per free generator followed by one residue per
    torsion generator.

    >>> g = FGAbelianGroup(free_rank=1, torsion=(2, 4))
    >>> g.zero().coords
    (0, 0, 0)
    >>> g.element((3, 5, -1)).coords
    (3, 1, 3)
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        prev = None
        for d in self.torsion:
            if not isinstance(d, int) or d < 2:
                raise ValueError("invariant factors must be integers >= 2")
            if prev is not None and d % prev:
                raise ValueError("invariant factors must form a divisibility chain")
            prev = d

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    def element(self, coords: Sequence[int]) -> "GroupElement":
        return GroupElement(self, tuple(int(c) for c in coords))

    def zero(self) -> "GroupElement":
        return self.element((0,) * self.ngens)

    def generator(self, index: int) -> "GroupElement":
        if not 0 <= index < self.ngens:
            raise ValueError("generator index out of range")
        return self.element(tuple(int(i == index) for i in range(self.ngens)))

    def generators(self) -> tuple["GroupElement", ...]:
        return tuple(self.generator(i) for i in range(self.ngens))

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def elements(self) -> Iterator["GroupElement"]:
        """Iterate over all elements.  Only defined for finite groups."""
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")
        for combo in product(*(range(d) for d in self.torsion)):
            yield self.element(combo)


@dataclass(frozen=True)
class GroupElement:
    """An element of an FGAbelianGroup, torsion residues kept in [0, d)."""

    parent: FGAbelianGroup
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        g = self.parent
        if len(self.coords) != g.ngens:
            raise ValueError("coordinate count does not match the group")
        reduced = list(self.coords)
        for k, d in enumerate(g.torsion):
            reduced[g.free_rank + k] %= d
        object.__setattr__(self, "coords", tuple(reduced))

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if self.parent != other.parent:
            raise ValueError("elements of different groups")
        return self.parent.element(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return self.parent.element(tuple(-x for x in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __mul__(self, k: int) -> "GroupElement":
        if not isinstance(k, int):
            return NotImplemented
        return self.parent.element(tuple(k * x for x in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)


@dataclass(frozen=True)
class CircleValue:
    """A rational point of the circle R/Z, normalized into [0, 1).

    >>> CircleValue(Fraction(3, 4)) + CircleValue(Fraction(1, 2))
    CircleValue(value=Fraction(1, 4))
    >>> CircleValue(Fraction(-1, 3))
    CircleValue(value=Fraction(2, 3))
    """

    value: Fraction

    def __post_init__(self) -> None:
        v = Fraction(self.value)
        object.__setattr__(self, "value", v - (v.numerator // v.denominator))

    def __add__(self, other: "CircleValue") -> "CircleValue":
        return CircleValue(self.value + other.value)

    def __neg__(self) -> "CircleValue":
        return CircleValue(-self.value)

    def __sub__(self, other: "CircleValue") -> "CircleValue":
        return CircleValue(self.value - other.value)

    def __mul__(self, k: int) -> "CircleValue":
        if not isinstance(k, int):
            return NotImplemented
        return CircleValue(k * self.value)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.value == 0


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism between FGAbelianGroups given by an integer matrix.

    Column j of ``matrix`` is the image of the j-th domain generator in
    codomain coordinates.  Construction checks that torsion is respected:
    a generator of order d must map to an element killed by d.
    """

    domain: FGAbelianGroup
    codomain: FGAbelianGroup
    matrix: IntegerMatrix

    def __post_init__(self) -> None:
        if self.matrix.rows != self.codomain.ngens or self.matrix.cols != self.domain.ngens:
            raise ValueError("matrix shape does not match the groups")
        for j, d in enumerate(self.domain.torsion):
            col = self.matrix.column(self.domain.free_rank + j)
            image = self.codomain.element(col)
            if not (d * image).is_zero():
                raise ValueError("matrix does not respect torsion")

    def apply(self, element: GroupElement) -> GroupElement:
        if element.parent != self.domain:
            raise ValueError("element does not belong to the domain")
        return self.codomain.element(self.matrix.apply(element.coords))

    def __call__(self, element: GroupElement) -> GroupElement:
        return self.apply(element)


@dataclass(frozen=True)
class CokernelPresentation:
    """Cokernel of an integer matrix together with the projection map.

    For relations m: Z^cols -> Z^rows, ``group`` is Z^rows / im(m) in
    invariant-factor form and ``project`` sends a vector of Z^rows to its
    class.  ``transform`` is the row-operation matrix of the Smith form
    whose rows read off the coordinates.
    """

    group: FGAbelianGroup
    transform: IntegerMatrix
    free_rows: tuple[int, ...]
    torsion_rows: tuple[int, ...]

    def project(self, vector: Sequence[int]) -> GroupElement:
        if len(vector) != self.transform.cols:
            raise ValueError("vector length does not match the ambient rank")
        w = self.transform.apply(vector)
        coords = [w[i] for i in self.free_rows]
        coords.extend(w[i] for i in self.torsion_rows)
        return self.group.element(coords)


def cokernel_presentation(m: IntegerMatrix) -> CokernelPresentation:
    """Present Z^rows / (column span of m) with its projection.

    >>> pres = cokernel_presentation(IntegerMatrix.from_rows([[2, 0], [0, 1]]))
    >>> pres.group
    FGAbelianGroup(free_rank=0, torsion=(2,))
    >>> pres.project((1, 0)).coords
    (1,)
    """
    u, s, _ = smith_normal_form(m)
    diag = [s.entry(i, i) for i in range(min(s.rows, s.cols))]
    torsion_rows = tuple(i for i, d in enumerate(diag) if d >= 2)
    killed = {i for i, d in enumerate(diag) if d == 1}
    free_rows = tuple(
        i for i in range(m.rows) if i not in killed and not (i < len(diag) and diag[i] >= 2)
    )
    group = FGAbelianGroup(
        free_rank=len(free_rows),
        torsion=tuple(diag[i] for i in torsion_rows),
    )
    return CokernelPresentation(group, u, free_rows, torsion_rows)


def cokernel(m: IntegerMatrix) -> FGAbelianGroup:
    """Invariant-factor form of the quotient Z^rows / im(m).

    >>> cokernel(IntegerMatrix.from_rows([[2, 0], [0, 0]]))
    FGAbelianGroup(free_rank=1, torsion=(2,))
    >>> cokernel(IntegerMatrix(3, 0, ()))
    FGAbelianGroup(free_rank=3, torsion=())
    """
    return cokernel_presentation(m).group


def kernel_basis(m: IntegerMatrix) -> IntegerMatrix:
    """A saturated basis of ker(m: Z^cols -> Z^rows), returned as columns.

    The basis vectors are columns of the unimodular V of the Smith form,
    so they extend to a basis of Z^cols and the kernel they span is a
    direct summand.

    >>> kernel_basis(IntegerMatrix.from_rows([[1, 1, 1]])).cols
    2
    """
    _, s, v = smith_normal_form(m)
    rank = sum(1 for i in range(min(s.rows, s.cols)) if s.entry(i, i) != 0)
    columns = [v.column(j) for j in range(rank, m.cols)]
    return IntegerMatrix.from_columns(columns, rows=m.cols)


def n_torsion(group: FGAbelianGroup, n: int) -> tuple[FGAbelianGroup, GroupHom]:
    """The subgroup of elements killed by n, with its inclusion hom.

    Each cyclic factor Z/d contributes Z/gcd(n, d), generated by
    (d / gcd(n, d)) times the original generator; the free part
    contributes nothing.

    >>> g = FGAbelianGroup(free_rank=1, torsion=(4, 12))
    >>> sub, incl = n_torsion(g, 2)
    >>> sub
    FGAbelianGroup(free_rank=0, torsion=(2, 2))
    >>> incl.matrix.to_rows()
    ((0, 0), (2, 0), (0, 6))
    """
    if n <= 0:
        raise ValueError("n must be positive")
    columns: list[tuple[int, ...]] = []
    factors: list[int] = []
    for k, d in enumerate(group.torsion):
        q = gcd(n, d)
        if q > 1:
            factors.append(q)
            col = [0] * group.ngens
            col[group.free_rank + k] = d // q
            columns.append(tuple(col))
    sub = FGAbelianGroup(free_rank=0, torsion=tuple(factors))
    matrix = (
        IntegerMatrix.from_columns(columns, rows=group.ngens)
        if columns
        else IntegerMatrix(group.ngens, 0, ())
    )
    return sub, GroupHom(sub, group, matrix)


@dataclass(frozen=True)
class FormalSum:
    """A finite integer combination of hashable objects.

    Terms are merged, zero coefficients dropped, and the storage order
    canonicalized, so two sums are equal exactly when every object has
    the same total coefficient.

    >>> s = FormalSum.of((2, "a"), (1, "b")) - FormalSum.of((1, "a"))
    >>> s.coefficient("a"), s.coefficient("b"), s.coefficient("c")
    (1, 1, 0)
    >>> (s - s).is_zero()
    True
    """

    terms: tuple[tuple[int, object], ...]

    def __post_init__(self) -> None:
        merged: dict[object, int] = {}
        for coeff, item in self.terms:
            if not isinstance(coeff, int):
                raise ValueError("coefficients must be integers")
            merged[item] = merged.get(item, 0) + coeff
        cleaned = tuple(
            (c, item)
            for item, c in sorted(merged.items(), key=lambda kv: repr(kv[0]))
            if c != 0
        )
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def of(cls, *pairs: tuple[int, object]) -> "FormalSum":
        return cls(tuple(pairs))

    @classmethod
    def zero(cls) -> "FormalSum":
        return cls(())

    @classmethod
    def single(cls, item: object, coeff: int = 1) -> "FormalSum":
        return cls(((coeff, item),))

    def coefficient(self, item: object) -> int:
        for c, it in self.terms:
            if it == item:
                return c
        return 0

    def items(self) -> tuple[tuple[int, object], ...]:
        return self.terms

    def support(self) -> tuple[object, ...]:
        return tuple(item for _, item in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return FormalSum(self.terms + other.terms)

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return self + (-other)

    def __neg__(self) -> "FormalSum":
        return (-1) * self

    def __mul__(self, k: int) -> "FormalSum":
        if not isinstance(k, int):
            return NotImplemented
        return FormalSum(tuple((k * c, item) for c, item in self.terms))

    __rmul__ = __mul__
