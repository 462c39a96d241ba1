"""Tropical Klein bottles: classification, sections, and Albanese data.

A tropical affine torus is the plane with its standard integral affine
structure divided by a lattice of translations; a tropical Klein bottle
is the further quotient by a free orientation-reversing affine
involution.  This module normalizes such quotients to a canonical form,
realizes section classes by quadratic polynomials and piecewise-linear
approximations, extracts bend loci, and evaluates the tropical Albanese
map on zero-cycles.

Only rational lattices and rational parameters are admitted, so every
computation is exact and equality is decidable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Literal, Sequence

from cobcalc.abelian import CircleValue

__all__ = [
    "NotOrientationReversing",
    "HasFixedPoints",
    "LatticeNotInvariant",
    "UnsupportedFamily",
    "NonzeroDegree",
    "AffineMap2",
    "Lattice2",
    "TropicalKlein",
    "SectionClass",
    "PLFunction1D",
    "TropicalHypersurface",
    "standardize",
    "section_representative",
    "pl_approximation",
    "pl_half_square",
    "pl_drift",
    "bend_locus",
    "albanese_data",
    "alb_zero_cycle",
]

Rational = int | Fraction


class NotOrientationReversing(ValueError):
    """The involution preserves orientation, so no Klein bottle results."""


class HasFixedPoints(ValueError):
    """The involution is not free on the torus."""


class LatticeNotInvariant(ValueError):
    """A lattice is not preserved, e.g. not symmetric under (x,y)->(x,-y)."""


class UnsupportedFamily(ValueError):
    """The requested construction only exists for the rectangular family."""


class NonzeroDegree(ValueError):
    """A zero-cycle argument must have signs summing to zero."""


def _frac(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _det2(v: tuple[Fraction, Fraction], w: tuple[Fraction, Fraction]) -> Fraction:
    return v[0] * w[1] - v[1] * w[0]


@dataclass(frozen=True)
class AffineMap2:
    """An affine self-map of the plane, v -> linear.v + translation.

    ``linear`` is stored as two rows; all entries are Fractions.
    """

    linear: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    translation: tuple[Fraction, Fraction]

    def __post_init__(self) -> None:
        rows = tuple(tuple(_frac(x) for x in row) for row in self.linear)
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValueError("linear part must be a 2x2 matrix")
        object.__setattr__(self, "linear", rows)
        t = tuple(_frac(x) for x in self.translation)
        if len(t) != 2:
            raise ValueError("translation must be a plane vector")
        object.__setattr__(self, "translation", t)

    def apply(self, v: tuple[Rational, Rational]) -> tuple[Fraction, Fraction]:
        x, y = _frac(v[0]), _frac(v[1])
        (a, b), (c, d) = self.linear
        return (a * x + b * y + self.translation[0], c * x + d * y + self.translation[1])


@dataclass(frozen=True)
class Lattice2:
    """A rank-2 lattice in the plane, generators stored as columns.

    >>> lat = Lattice2(((Fraction(1), Fraction(0)), (Fraction(1, 2), Fraction(1, 2))))
    >>> lat.contains((Fraction(3, 2), Fraction(1, 2)))
    True
    >>> lat.contains((Fraction(1, 2), Fraction(0)))
    False
    """

    basis: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]

    def __post_init__(self) -> None:
        cols = tuple(tuple(_frac(x) for x in col) for col in self.basis)
        if len(cols) != 2 or any(len(c) != 2 for c in cols):
            raise ValueError("basis must consist of two plane vectors")
        object.__setattr__(self, "basis", cols)
        if _det2(*cols) == 0:
            raise ValueError("basis vectors are linearly dependent")

    def determinant(self) -> Fraction:
        return _det2(*self.basis)

    def coordinates(self, v: tuple[Rational, Rational]) -> tuple[Fraction, Fraction]:
        """Coordinates of v in the lattice basis (exact)."""
        b1, b2 = self.basis
        det = self.determinant()
        x, y = _frac(v[0]), _frac(v[1])
        return ((x * b2[1] - y * b2[0]) / det, (y * b1[0] - x * b1[1]) / det)

    def contains(self, v: tuple[Rational, Rational]) -> bool:
        a, b = self.coordinates(v)
        return a.denominator == 1 and b.denominator == 1

    def primitive_on_line(self, direction: tuple[Rational, Rational]) -> tuple[Fraction, Fraction]:
        """The primitive lattice vector on a rational line through 0.

        The intersection of a rational lattice with a rational line is
        infinite cyclic; this returns the generator whose first nonzero
        coordinate is positive.
        """
        d = (_frac(direction[0]), _frac(direction[1]))
        if d == (0, 0):
            raise ValueError("direction must be nonzero")
        b1, b2 = self.basis
        # m*b1 + n*b2 parallel to d  <=>  m*det(b1,d) + n*det(b2,d) = 0
        p, q = _det2(b2, d), -_det2(b1, d)
        denom = p.denominator * q.denominator // gcd(p.denominator, q.denominator)
        m, n = int(p * denom), int(q * denom)
        g = gcd(m, n)
        m, n = m // g, n // g
        w = (m * b1[0] + n * b2[0], m * b1[1] + n * b2[1])
        if w[0] < 0 or (w[0] == 0 and w[1] < 0):
            w = (-w[0], -w[1])
        return w


Family = Literal["K1", "K2"]

_DIAG = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(-1)))
_SWAP = ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0)))


@dataclass(frozen=True)
class TropicalKlein:
    """A tropical Klein bottle in canonical form.

    ``lattice`` is the deck lattice of the covering torus, in canonical
    basis.  The rectangular family K1 has an axis-aligned deck diag(a, b)
    and the reflection involution (x, y) -> (x + a/2, -y).  The centered
    family K2 has deck generated by (t, t) and (s, -s) with the coordinate
    swap involution (x, y) -> (y + t/2, x + t/2); no diagonal-form free
    involution exists over such a deck.
    """

    family: Family
    lattice: Lattice2
    involution: AffineMap2

    def __post_init__(self) -> None:
        (w1, w2) = self.lattice.basis
        lin = self.involution.linear
        tr = self.involution.translation
        if self.family == "K1":
            ok = (
                w1[1] == 0
                and w2[0] == 0
                and w1[0] > 0
                and w2[1] > 0
                and lin == _DIAG
                and tr == (w1[0] / 2, Fraction(0))
            )
        elif self.family == "K2":
            ok = (
                w1[0] == w1[1] > 0
                and w2[0] == -w2[1] > 0
                and lin == _SWAP
                and tr == (w1[0] / 2, w1[0] / 2)
            )
        else:
            ok = False
        if not ok:
            raise ValueError("not canonical standard-form data; use standardize()")

    def x_scale(self) -> Fraction:
        """Length of the primitive deck vector fixed by the involution."""
        return self.lattice.basis[0][0]


@dataclass(frozen=True)
class SectionClass:
    """A section class (m, n, l, theta) with l mod 2 and theta on the circle."""

    m: int
    n: int
    l: int
    theta: CircleValue

    def __post_init__(self) -> None:
        object.__setattr__(self, "l", self.l % 2)


@dataclass(frozen=True)
class PLFunction1D:
    """A piecewise-linear function on the line, one period chart plus growth.

    The chart covers [0, 1): ``slopes[i]`` holds on
    [breakpoints[i], breakpoints[i+1]) and the final slope runs to 1.
    The first breakpoint is always 0 (the chart seam, which need not be a
    bend).  ``drift`` is the value increase over one period starting at 0
    and always equals the sum of slope times interval length.
    ``slope_increment`` is added to every slope when passing to the next
    period, so the derivative satisfies f'(x + 1) = f'(x) + increment.
    Values are normalized by f(0) = 0.

    >>> f = pl_half_square()
    >>> f.evaluate(Fraction(3, 2))
    Fraction(1, 1)
    >>> f.evaluate(Fraction(-3, 2)) == f.evaluate(Fraction(3, 2))
    True
    """

    breakpoints: tuple[Fraction, ...]
    slopes: tuple[int, ...]
    drift: Fraction
    slope_increment: int = 0

    def __post_init__(self) -> None:
        bps = tuple(_frac(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "drift", _frac(self.drift))
        if not bps or bps[0] != 0:
            raise ValueError("chart must start at 0")
        if any(not 0 <= b < 1 for b in bps) or any(
            bps[i] >= bps[i + 1] for i in range(len(bps) - 1)
        ):
            raise ValueError("breakpoints must be strictly increasing within [0, 1)")
        if len(self.slopes) != len(bps):
            raise ValueError("one slope per chart interval")
        if any(not isinstance(s, int) for s in self.slopes):
            raise ValueError("slopes must be integers")
        if any(self.slopes[i] == self.slopes[i + 1] for i in range(len(bps) - 1)):
            raise ValueError("adjacent chart intervals must have distinct slopes")
        if not isinstance(self.slope_increment, int):
            raise ValueError("slope increment must be an integer")
        if self._chart_integral(Fraction(1)) != self.drift:
            raise ValueError("drift must equal the chart integral over one period")

    @classmethod
    def build(
        cls,
        breakpoints: Sequence[Rational],
        slopes: Sequence[int],
        slope_increment: int = 0,
    ) -> "PLFunction1D":
        """Canonicalize raw chart data: merge equal-slope neighbours, set drift."""
        bps = [_frac(b) for b in breakpoints]
        sls = list(slopes)
        merged_b: list[Fraction] = []
        merged_s: list[int] = []
        for b, s in zip(bps, sls):
            if merged_s and merged_s[-1] == s:
                continue
            merged_b.append(b)
            merged_s.append(s)
        drift = sum(
            (s * ((merged_b[i + 1] if i + 1 < len(merged_b) else Fraction(1)) - b))
            for i, (b, s) in enumerate(zip(merged_b, merged_s))
        )
        return cls(tuple(merged_b), tuple(merged_s), Fraction(drift), slope_increment)

    def _chart_integral(self, t: Fraction) -> Fraction:
        """Integral of the chart slopes from 0 to t, for t in [0, 1]."""
        total = Fraction(0)
        for i, (b, s) in enumerate(zip(self.breakpoints, self.slopes)):
            end = self.breakpoints[i + 1] if i + 1 < len(self.breakpoints) else Fraction(1)
            lo, hi = b, min(end, t)
            if hi > lo:
                total += s * (hi - lo)
            if end >= t:
                break
        return total

    def evaluate(self, x: Rational) -> Fraction:
        """Exact value at a rational point, computed by direct integration."""
        x = _frac(x)
        k = x.numerator // x.denominator
        t = x - k
        # integral over k whole periods, where period j has slopes + j*increment
        whole = k * self.drift + self.slope_increment * Fraction(k * (k - 1), 2)
        return whole + self._chart_integral(t) + k * self.slope_increment * t

    def __add__(self, other: "PLFunction1D") -> "PLFunction1D":
        cuts = sorted(set(self.breakpoints) | set(other.breakpoints))
        slopes = [self._slope_at(c) + other._slope_at(c) for c in cuts]
        return PLFunction1D.build(cuts, slopes, self.slope_increment + other.slope_increment)

    def _slope_at(self, t: Fraction) -> int:
        current = self.slopes[0]
        for b, s in zip(self.breakpoints, self.slopes):
            if b <= t:
                current = s
            else:
                break
        return current

    def __mul__(self, k: int) -> "PLFunction1D":
        if not isinstance(k, int):
            return NotImplemented
        return PLFunction1D.build(
            self.breakpoints, [k * s for s in self.slopes], k * self.slope_increment
        )

    __rmul__ = __mul__

    def __neg__(self) -> "PLFunction1D":
        return (-1) * self

    def is_constant(self) -> bool:
        return self.slopes == (0,) and self.slope_increment == 0


Axis = Literal["x", "y"]


@dataclass(frozen=True)
class TropicalHypersurface:
    """A finite union of weighted coordinate circles in the torus chart."""

    components: tuple[tuple[Axis, CircleValue, int], ...]

    def __post_init__(self) -> None:
        seen: set[tuple[str, CircleValue]] = set()
        for axis, pos, weight in self.components:
            if axis not in ("x", "y"):
                raise ValueError("axis must be 'x' or 'y'")
            if not isinstance(weight, int) or weight == 0:
                raise ValueError("weights must be nonzero integers")
            if (axis, pos) in seen:
                raise ValueError("positions must be distinct per axis")
            seen.add((axis, pos))

    def total_weight(self, axis: Axis) -> int:
        return sum(w for a, _, w in self.components if a == axis)


def standardize(lattice: Lattice2, involution: AffineMap2) -> TropicalKlein:
    """Bring a free orientation-reversing quotient to its canonical form.

    The input describes the covering torus by its deck lattice (the
    ambient integral structure is standard) and the involution by an
    affine map.  The output is the unique canonical representative: the
    deck is rewritten in a basis of eigenvectors of the linear part, and
    the translation is reduced to half the fixed primitive deck vector.

    >>> std = standardize(
    ...     Lattice2(((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))),
    ...     AffineMap2(((1, 0), (0, -1)), (Fraction(1, 2), 0)),
    ... )
    >>> std.family
    'K1'
    >>> std.involution.translation
    (Fraction(1, 2), Fraction(0, 1))
    """
    lin = involution.linear
    if any(x.denominator != 1 for row in lin for x in row):
        raise LatticeNotInvariant(
            "linear part does not preserve the standard integral structure"
        )
    a11, a12 = int(lin[0][0]), int(lin[0][1])
    a21, a22 = int(lin[1][0]), int(lin[1][1])
    det_a = a11 * a22 - a12 * a21

    b1, b2 = lattice.basis
    img1 = (lin[0][0] * b1[0] + lin[0][1] * b1[1], lin[1][0] * b1[0] + lin[1][1] * b1[1])
    img2 = (lin[0][0] * b2[0] + lin[0][1] * b2[1], lin[1][0] * b2[0] + lin[1][1] * b2[1])
    if not (lattice.contains(img1) and lattice.contains(img2) and abs(det_a) == 1):
        raise LatticeNotInvariant("linear part does not preserve the deck lattice")
    if det_a != -1:
        raise NotOrientationReversing("linear part must have determinant -1")

    # involutivity on the torus: A^2 = 1 and (A + 1)c a deck vector
    sq = (
        a11 * a11 + a12 * a21,
        a11 * a12 + a12 * a22,
        a21 * a11 + a22 * a21,
        a21 * a12 + a22 * a22,
    )
    if sq != (1, 0, 0, 1):
        raise ValueError("linear part is not an involution")
    c = involution.translation
    apc = ((a11 + 1) * c[0] + a12 * c[1], a21 * c[0] + (a22 + 1) * c[1])
    if not lattice.contains(apc):
        raise ValueError("translation does not square to a deck translation")

    def primitive_int_kernel(m11: int, m12: int, m21: int, m22: int) -> tuple[int, int]:
        # primitive integer vector in the kernel of a rank-1 integer matrix
        if (m11, m12) != (0, 0):
            p, q = -m12, m11
        else:
            p, q = -m22, m21
        g = gcd(p, q)
        p, q = p // g, q // g
        if p < 0 or (p == 0 and q < 0):
            p, q = -p, -q
        return p, q

    u_plus = primitive_int_kernel(a11 - 1, a12, a21, a22 - 1)
    u_minus = primitive_int_kernel(a11 + 1, a12, a21, a22 + 1)
    w_plus = lattice.primitive_on_line(u_plus)
    w_minus = lattice.primitive_on_line(u_minus)

    # free iff the deck splits along the eigenlines and the fixed-direction
    # component of c is an odd multiple of half the primitive vector
    split = abs(_det2(w_plus, w_minus)) == abs(lattice.determinant())
    det_w = _det2(w_plus, w_minus)
    alpha = _det2(c, w_minus) / det_w
    if not split or alpha.denominator == 1:
        raise HasFixedPoints("the involution fixes a point of the torus")
    assert alpha.denominator == 2, "torus involutivity forces a half-integer component"

    def scale(w: tuple[Fraction, Fraction], u: tuple[int, int]) -> Fraction:
        r = w[0] / u[0] if u[0] else w[1] / u[1]
        return abs(r)

    a_scale = scale(w_plus, u_plus)
    b_scale = scale(w_minus, u_minus)
    index = abs(u_plus[0] * u_minus[1] - u_plus[1] * u_minus[0])
    assert index in (1, 2), "plane involutions split into exactly two integral classes"

    if index == 1:
        lat = Lattice2(((a_scale, Fraction(0)), (Fraction(0), b_scale)))
        inv = AffineMap2(_DIAG, (a_scale / 2, Fraction(0)))
        return TropicalKlein("K1", lat, inv)
    lat = Lattice2(((a_scale, a_scale), (b_scale, -b_scale)))
    inv = AffineMap2(_SWAP, (a_scale / 2, a_scale / 2))
    return TropicalKlein("K2", lat, inv)


def section_representative(s: SectionClass) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Coefficients (m/2, n/2, l/2, theta) of the quadratic representative.

    The section class is realized by the polynomial
    (m/2) x^2 + (n/2) y^2 + (l/2) y + theta x.

    >>> section_representative(SectionClass(2, 3, 1, CircleValue(Fraction(1, 4))))
    (Fraction(1, 1), Fraction(3, 2), Fraction(1, 2), Fraction(1, 4))
    """
    return (Fraction(s.m, 2), Fraction(s.n, 2), Fraction(s.l, 2), s.theta.value)


def pl_half_square() -> PLFunction1D:
    """The staircase PL approximation of x^2/2: slope k on (k-1/2, k+1/2)."""
    return PLFunction1D.build((Fraction(0), Fraction(1, 2)), (0, 1), slope_increment=1)


def pl_drift(phi: Rational) -> PLFunction1D:
    """The periodic-derivative PL function with drift phi in [0, 1).

    Slope 0 on (0, 1-phi) and slope 1 on (1-phi, 1); for phi = 0 the
    constant function.  The interior slope is forced to 0 by the drift
    equation, and the derivative is periodic.
    """
    phi = _frac(phi)
    phi -= phi.numerator // phi.denominator
    if phi == 0:
        return PLFunction1D.build((Fraction(0),), (0,))
    return PLFunction1D.build((Fraction(0), 1 - phi), (0, 1))


def pl_approximation(s: SectionClass) -> tuple[PLFunction1D, PLFunction1D]:
    """Piecewise-linear approximants of a section class, one per axis.

    The x-part is m copies of the staircase plus the drift-theta profile,
    the y-part n copies plus the drift-l/2 profile.  Both satisfy the same
    periodicity identities as the quadratic representative.

    >>> fx, fy = pl_approximation(SectionClass(1, 0, 0, CircleValue(Fraction(0))))
    >>> fx == pl_half_square(), fy.is_constant()
    (True, True)
    """
    fx = s.m * pl_half_square() + pl_drift(s.theta.value)
    fy = s.n * pl_half_square() + pl_drift(Fraction(s.l, 2))
    return fx, fy


def bend_locus(f: PLFunction1D, axis: Axis = "x") -> TropicalHypersurface:
    """The weighted bend locus of a PL function, one circle per bend.

    Interior bends carry the slope jump; the chart seam bends by the jump
    corrected for the per-period slope increment.  Zero jumps produce no
    component.

    >>> [c[1].value for c in bend_locus(pl_half_square()).components]
    [Fraction(1, 2)]
    """
    comps: list[tuple[Axis, CircleValue, int]] = []
    seam = f.slopes[0] - f.slopes[-1] + f.slope_increment
    if seam:
        comps.append((axis, CircleValue(Fraction(0)), seam))
    for i in range(1, len(f.breakpoints)):
        comps.append((axis, CircleValue(f.breakpoints[i]), f.slopes[i] - f.slopes[i - 1]))
    return TropicalHypersurface(tuple(comps))


def albanese_data(klein: TropicalKlein) -> tuple[tuple[str, ...], Fraction]:
    """Global 1-form basis and its period over the canonical Klein loop.

    Only the rectangular family carries the global form dx; the loop
    generated by the involution displaces x by half the primitive deck
    vector, so the period is a/2 for deck diag(a, b).

    >>> std = standardize(
    ...     Lattice2(((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))),
    ...     AffineMap2(((1, 0), (0, -1)), (Fraction(1, 2), 0)),
    ... )
    >>> albanese_data(std)
    (('dx',), Fraction(1, 2))
    """
    if klein.family != "K1":
        raise UnsupportedFamily("global 1-forms require the rectangular family")
    return (("dx",), klein.x_scale() / 2)


def alb_zero_cycle(
    points: Sequence[tuple[int, tuple[Rational, Rational]]],
    klein: TropicalKlein,
) -> CircleValue:
    """Albanese value of a degree-zero 0-cycle, rescaled into Q/Z.

    Sums the signed x-coordinates, reduces mod the period of dx, and
    divides by the period so the answer lives in the standard circle.

    >>> std = standardize(
    ...     Lattice2(((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))),
    ...     AffineMap2(((1, 0), (0, -1)), (Fraction(1, 2), 0)),
    ... )
    >>> alb_zero_cycle([(1, (Fraction(1, 4), 0)), (-1, (0, 0))], std)
    CircleValue(value=Fraction(1, 2))
    """
    _, period = albanese_data(klein)
    degree = sum(coeff for coeff, _ in points)
    if degree != 0:
        raise NonzeroDegree(f"cycle has degree {degree}, expected 0")
    displacement = sum((coeff * _frac(pt[0]) for coeff, pt in points), Fraction(0))
    return CircleValue(displacement / period)
