"""Decorated branes over the rectangular Klein base and their normal forms.

The branes live in the twisted torus bundle whose base is the standard
rectangular Klein bottle: torus fibers with two monodromies, graphs of
sections with grading parity and a rank-one local system, and conormal
lifts of vertical and horizontal circles.  Formal sums of branes are
reduced to a complete invariant (the twisted middle homology class, a
two-torsion monodromy functional, and one Albanese pair for each of the
two transverse torus fibrations), so cobordism questions become equality
of tuples computed in exact arithmetic.

Only the preferred brane shapes appear here.  Vertical circles come with
their full conormal torus, horizontal circles sit at the two
reflection-fixed heights where the lift is a Klein bottle, and sections
are encoded by the discrete data of their piecewise-linear model.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence, Union

from .abelian import (
    CircleValue,
    FGAbelianGroup,
    FormalSum,
    GroupElement,
    n_torsion,
)
from .homology import (
    H2Class,
    class_of_fiber,
    class_of_lift_x,
    class_of_lift_y,
    class_of_section,
)
from .tropical import (
    AffineMap2,
    Lattice2,
    SectionClass,
    alb_zero_cycle,
    bend_locus,
    pl_approximation,
    standardize,
)

__all__ = [
    "NotInKernel",
    "Fiber",
    "Section",
    "LiftX",
    "LiftY",
    "InvariantTuple",
    "two_torsion_part",
    "cyc",
    "psi",
    "surgery_decompose",
    "fiber_reduce",
    "alb_loc",
    "alb_prime_loc",
    "splitting_section",
    "normal_form",
    "is_cobordant",
]

Rational = Union[int, Fraction]

_HALF = Fraction(1, 2)

# Unit rectangular Klein base shared by every brane in this module: deck
# lattice Z^2, glide x -> x + 1/2 composed with y -> -y.
_BASE = standardize(
    Lattice2(((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))),
    AffineMap2(((1, 0), (0, -1)), (Fraction(1, 2), 0)),
)


class NotInKernel(ValueError):
    """Albanese values only exist for sums with vanishing refined cycle class."""


def two_torsion_part(value: GroupElement, group: FGAbelianGroup) -> GroupElement:
    """A 2-torsion element of ``group`` rewritten in its 2-torsion subgroup.

    Elements already living in the subgroup pass through unchanged.  The
    subgroup generator over an even factor d is d/2 times the original
    one, so the coordinate there is the residue divided by d/2.

    >>> G = FGAbelianGroup(free_rank=1, torsion=(2, 4))
    >>> two_torsion_part(G.element((0, 0, 2)), G).coords
    (0, 1)
    """
    sub, _ = n_torsion(group, 2)
    if value.parent == sub:
        return value
    if value.parent != group:
        raise ValueError("element belongs to neither the group nor its 2-torsion")
    if not (2 * value).is_zero():
        raise ValueError("element is not 2-torsion")
    coords = []
    for j, d in enumerate(group.torsion):
        if gcd(2, d) > 1:
            coords.append(value.coords[group.free_rank + j] // (d // 2))
    return sub.element(tuple(coords))


def _circle(value: Union[CircleValue, Rational]) -> CircleValue:
    if isinstance(value, CircleValue):
        return value
    return CircleValue(Fraction(value))


@dataclass(frozen=True)
class Fiber:
    """A torus fiber with its two monodromies.

    The base point is folded into the fundamental domain x in [0, 1/2),
    y in [0, 1); crossing the glide negates y and inverts the second
    monodromy while fixing the first.
    """

    base: tuple[Rational, Rational]
    mono_x: GroupElement
    mono_y: GroupElement

    def __post_init__(self) -> None:
        x, y = (Fraction(c) for c in self.base)
        x -= x.numerator // x.denominator
        mono_y = self.mono_y
        if x >= _HALF:
            x -= _HALF
            y, mono_y = -y, -mono_y
        y -= y.numerator // y.denominator
        object.__setattr__(self, "base", (x, y))
        object.__setattr__(self, "mono_y", mono_y)
        if self.mono_x.parent != mono_y.parent:
            raise ValueError("fiber monodromies must live in one group")


@dataclass(frozen=True)
class Section:
    """The graph of a section with grading parity and local system.

    ``profile`` holds the discrete invariants of the piecewise-linear
    model.  ``eta_z`` is the monodromy along the free base loop and
    ``eta_z2`` the one along the two-torsion loop; the latter is stored
    in the 2-torsion subgroup of eta_z's parent and may be handed in
    either there or as a 2-torsion element of the full group.  An odd
    grading shift only flips the sign of the class, so ``parity`` is
    plus or minus one.
    """

    profile: SectionClass
    eta_z: GroupElement
    eta_z2: GroupElement
    parity: int = 1

    def __post_init__(self) -> None:
        if self.parity not in (1, -1):
            raise ValueError("parity must be +1 or -1")
        object.__setattr__(
            self, "eta_z2", two_torsion_part(self.eta_z2, self.eta_z.parent)
        )


@dataclass(frozen=True)
class LiftX:
    """Conormal lifts of vertical circles, one torus per circle.

    Vertical circles at x and x + 1/2 coincide downstairs, so positions
    are folded modulo 1/2.  Each circle carries the monodromy along its
    conormal loop; ``eta_z2`` decorates the base loop, which the glide
    forces to be two-torsion.
    """

    circles: tuple[tuple[CircleValue, GroupElement], ...]
    eta_z2: GroupElement

    def __post_init__(self) -> None:
        if not self.circles:
            raise ValueError("a lift needs at least one circle")
        folded = tuple(
            (CircleValue(_circle(pos).value % _HALF), nu) for pos, nu in self.circles
        )
        group = folded[0][1].parent
        if any(nu.parent != group for _, nu in folded):
            raise ValueError("circle monodromies must live in one group")
        ordered = tuple(sorted(folded, key=lambda c: (c[0].value, c[1].coords)))
        object.__setattr__(self, "circles", ordered)
        object.__setattr__(self, "eta_z2", two_torsion_part(self.eta_z2, group))


@dataclass(frozen=True)
class LiftY:
    """Weighted conormal lifts of horizontal circles at the fixed heights.

    Horizontal circles survive the glide only at heights 0 and 1/2,
    where the lift is a Klein bottle; its conormal loop has order two,
    so each monodromy must be 2-torsion.  Circles with equal position
    and monodromy merge by adding weights.
    """

    circles: tuple[tuple[CircleValue, int, GroupElement], ...]

    def __post_init__(self) -> None:
        merged: dict[tuple[CircleValue, GroupElement], int] = {}
        for pos, weight, nu in self.circles:
            pos = _circle(pos)
            if pos.value not in (Fraction(0), _HALF):
                raise ValueError("horizontal circles sit at height 0 or 1/2")
            if not (2 * nu).is_zero():
                raise ValueError("conormal monodromy of a horizontal lift is 2-torsion")
            key = (pos, nu)
            merged[key] = merged.get(key, 0) + weight
        cleaned = tuple(
            sorted(
                ((pos, w, nu) for (pos, nu), w in merged.items() if w),
                key=lambda c: (c[0].value, c[2].coords),
            )
        )
        if not cleaned:
            raise ValueError("a lift needs at least one circle")
        object.__setattr__(self, "circles", cleaned)


Brane = Union[Fiber, Section, LiftX, LiftY]


def _group_of(sum_: FormalSum, group: FGAbelianGroup | None) -> FGAbelianGroup:
    for brane in sum_.support():
        if isinstance(brane, Fiber):
            return brane.mono_x.parent
        if isinstance(brane, Section):
            return brane.eta_z.parent
        if isinstance(brane, LiftX):
            return brane.circles[0][1].parent
        if isinstance(brane, LiftY):
            return brane.circles[0][2].parent
    if group is None:
        raise ValueError("group is required for the empty sum")
    return group


def cyc(sum_: FormalSum) -> H2Class:
    """Twisted middle homology class of a formal sum of branes.

    >>> from .abelian import FGAbelianGroup
    >>> G = FGAbelianGroup(free_rank=1, torsion=())
    >>> e = G.zero()
    >>> gamma0 = Section(SectionClass(0, 0, 0, CircleValue(Fraction(0))), e, e)
    >>> cyc(FormalSum.single(gamma0))
    H2Class(a=0, b=1, m=0, n=0, l=0)
    """
    total = H2Class(0, 0, 0, 0, 0)
    for coeff, brane in sum_.items():
        total = total + coeff * _brane_class(brane)
    return total


def _brane_class(brane: Brane) -> H2Class:
    if isinstance(brane, Fiber):
        return class_of_fiber()
    if isinstance(brane, Section):
        return brane.parity * class_of_section(brane.profile)
    if isinstance(brane, LiftX):
        return class_of_lift_x(len(brane.circles))
    if isinstance(brane, LiftY):
        total = sum(w for _, w, _ in brane.circles)
        at_zero = sum(w for pos, w, _ in brane.circles if pos.value == 0)
        return class_of_lift_y(total, at_zero)
    raise TypeError(f"not a brane: {brane!r}")


def psi(sum_: FormalSum, group: FGAbelianGroup | None = None) -> GroupElement:
    """Two-torsion monodromy functional, valued in the 2-torsion subgroup.

    Computed by pairing with the wall over a vertical circle: the wall
    slides freely in the base, so only branes meeting every vertical
    circle contribute.  Sections cut it once along their two-torsion
    loop and horizontal lifts along each conormal circle; fibers and
    vertical lifts can be pushed off entirely.  Grading parity enters
    with the same sign convention as the cycle class.
    """
    g = _group_of(sum_, group)
    sub, _ = n_torsion(g, 2)
    total = sub.zero()
    for coeff, brane in sum_.items():
        if isinstance(brane, Section):
            total = total + (coeff * brane.parity) * brane.eta_z2
        elif isinstance(brane, LiftY):
            crossing = g.zero()
            for _, weight, nu in brane.circles:
                crossing = crossing + weight * nu
            total = total + coeff * two_torsion_part(crossing, g)
    return total


def _expand_x_circles(
    fx_components: Sequence[tuple[str, CircleValue, int]],
    eta_z: GroupElement,
    distribution: Sequence[GroupElement] | None,
) -> list[tuple[CircleValue, int, GroupElement]]:
    """Split weighted x-bends into unit circles and attach free monodromies.

    The default pushes the whole free monodromy onto the first circle
    (twisted by its own sign); an explicit distribution may assign one
    monodromy per circle as long as the signed total matches.
    """
    signed: list[tuple[CircleValue, int]] = []
    for _, pos, weight in fx_components:
        sign = 1 if weight > 0 else -1
        signed.extend((pos, sign) for _ in range(abs(weight)))
    group = eta_z.parent
    if distribution is None:
        if not signed:
            # no bend to carry the monodromy; the caller emits a pair instead
            return []
        monos = [group.zero()] * len(signed)
        monos[0] = signed[0][1] * eta_z
    else:
        monos = list(distribution)
        if len(monos) != len(signed):
            raise ValueError(
                f"distribution must assign one monodromy to each of the "
                f"{len(signed)} bend circles"
            )
    total = group.zero()
    for (_, sign), nu in zip(signed, monos):
        total = total + sign * nu
    if total != eta_z:
        raise ValueError("signed product of the distribution must be the free monodromy")
    return [(pos, sign, nu) for (pos, sign), nu in zip(signed, monos)]


def surgery_decompose(
    brane: Section, distribution: Sequence[GroupElement] | None = None
) -> FormalSum:
    """Rewrite a section as fibers, circle lifts, and the zero-section.

    The graph surgers into the conormal lifts over the bend circles of
    its piecewise-linear model plus the zero-section, with one fiber
    over every crossing of an x-bend with a y-bend.  The free monodromy
    rides on the x-circles, the two-torsion part on the zero-section and
    on every x-lift, and the y-lifts stay undecorated.  A section with
    free monodromy but no bends to carry it emits an opposite pair of
    unit vertical lifts instead; the pair crosses nothing, so it spawns
    no fibers.

    >>> from .abelian import FGAbelianGroup
    >>> G = FGAbelianGroup(free_rank=0, torsion=(4,))
    >>> e = G.zero()
    >>> s = Section(SectionClass(1, 1, 0, CircleValue(Fraction(0))), e, e)
    >>> sorted(type(b).__name__ for _, b in surgery_decompose(s).items())
    ['Fiber', 'LiftX', 'LiftY', 'Section']
    """
    group = brane.eta_z.parent
    zero = group.zero()
    s = brane.parity
    fx, fy = pl_approximation(brane.profile)
    x_circles = _expand_x_circles(
        bend_locus(fx, axis="x").components, brane.eta_z, distribution
    )
    if not x_circles and not brane.eta_z.is_zero():
        x_circles = [
            (CircleValue(Fraction(0)), 1, brane.eta_z),
            (CircleValue(Fraction(0)), -1, zero),
        ]
        crossing_circles: list[tuple[CircleValue, int, GroupElement]] = []
    else:
        crossing_circles = x_circles
    y_components = bend_locus(fy, axis="y").components

    terms: list[tuple[int, Brane]] = []
    for pos, sign, nu in x_circles:
        terms.append((s * sign, LiftX(((pos, nu),), brane.eta_z2)))
    if y_components:
        terms.append(
            (s, LiftY(tuple((pos, w, zero) for _, pos, w in y_components)))
        )
    for pos_x, sign, nu in crossing_circles:
        for _, pos_y, w in y_components:
            terms.append(
                (s * sign * w, Fiber((pos_x.value, pos_y.value), nu, zero))
            )
    terms.append(
        (
            s,
            Section(
                SectionClass(0, 0, 0, CircleValue(Fraction(0))),
                zero,
                brane.eta_z2,
            ),
        )
    )
    return FormalSum.of(*terms)


def fiber_reduce(brane: Fiber) -> Fiber:
    """Slide a fiber onto the fixed height 1/2, dropping its y-monodromy.

    Every fiber is cobordant to the one over the vertical projection of
    its base point, decorated with the x-monodromy alone; the y-part
    cancels against the reflected copy passed on the way.
    """
    group = brane.mono_x.parent
    return Fiber((brane.base[0], _HALF), brane.mono_x, group.zero())


def _require_kernel(sum_: FormalSum, group: FGAbelianGroup) -> None:
    if cyc(sum_) != H2Class(0, 0, 0, 0, 0) or not psi(sum_, group).is_zero():
        raise NotInKernel("the sum has a nonzero refined cycle class")


def alb_loc(
    sum_: FormalSum, group: FGAbelianGroup | None = None
) -> tuple[CircleValue, GroupElement]:
    """Albanese point and collected x-monodromy of a kernel sum.

    Only fibers contribute: the circle part is the Albanese value of the
    signed zero-cycle of base points, the group part the signed sum of
    x-monodromies.  Lifts project to cycles of degree zero on the base
    circle and sections to the full base, so both drop out.  (Sections
    are compared after decomposition, where their free monodromy already
    sits on vertical lifts.)

    >>> from .abelian import FGAbelianGroup
    >>> G = FGAbelianGroup(free_rank=1, torsion=())
    >>> e = G.zero()
    >>> pair = FormalSum.of(
    ...     (1, Fiber((Fraction(1, 4), _HALF), e, e)),
    ...     (-1, Fiber((Fraction(0), _HALF), e, e)),
    ... )
    >>> alb_loc(pair)[0]
    CircleValue(value=Fraction(1, 2))
    """
    g = _group_of(sum_, group)
    _require_kernel(sum_, g)
    points = []
    mono = g.zero()
    for coeff, brane in sum_.items():
        if isinstance(brane, Fiber):
            points.append((coeff, brane.base))
            mono = mono + coeff * brane.mono_x
    return alb_zero_cycle(points, _BASE), mono


def alb_prime_loc(
    sum_: FormalSum, group: FGAbelianGroup | None = None
) -> tuple[CircleValue, GroupElement]:
    """Albanese data of the swapped fibration, where vertical lifts are fibers.

    Exchanging the base height with its conormal coordinate carries the
    lift of the vertical circle at x to the fiber over (x, 0), with the
    conormal monodromy becoming the new x-monodromy; honest fibers
    become lifts and contribute nothing.
    """
    g = _group_of(sum_, group)
    _require_kernel(sum_, g)
    points = []
    mono = g.zero()
    for coeff, brane in sum_.items():
        if isinstance(brane, LiftX):
            for pos, nu in brane.circles:
                points.append((coeff, (pos.value, Fraction(0))))
                mono = mono + coeff * nu
    return alb_zero_cycle(points, _BASE), mono


def splitting_section(
    c: H2Class, g2: GroupElement, group: FGAbelianGroup
) -> FormalSum:
    """The reference brane sum realizing a refined cycle class.

    Fibers over the corner of the fundamental domain, undecorated
    zero-sections and unit lifts for the free slots, the lift difference
    for the torsion slot, and a decorated-minus-plain pair of horizontal
    lifts realizing the two-torsion monodromy.  The coefficient group
    must be passed explicitly because the class alone does not know it.
    """
    sub, include = n_torsion(group, 2)
    g2 = two_torsion_part(g2, group)
    zero = group.zero()
    origin = CircleValue(Fraction(0))
    half = CircleValue(_HALF)
    terms: list[tuple[int, Brane]] = []
    if c.a:
        terms.append((c.a, Fiber((Fraction(0), _HALF), zero, zero)))
    if c.b:
        terms.append(
            (c.b, Section(SectionClass(0, 0, 0, origin), zero, sub.zero()))
        )
    if c.m:
        terms.append((c.m, LiftX(((origin, zero),), sub.zero())))
    if c.n:
        terms.append((c.n, LiftY(((half, 1, zero),))))
    if c.l:
        terms.append((c.l, LiftY(((origin, -1, zero), (half, 1, zero)))))
    if not g2.is_zero():
        terms.append((1, LiftY(((half, 1, include(g2)),))))
        terms.append((-1, LiftY(((half, 1, zero),))))
    return FormalSum.of(*terms)


def _is_zero_section(brane: Section) -> bool:
    p = brane.profile
    return (
        p.m == 0
        and p.n == 0
        and p.l == 0
        and p.theta.is_zero()
        and brane.eta_z.is_zero()
        and brane.parity == 1
    )


def _reduce(sum_: FormalSum) -> FormalSum:
    """Decompose every section and slide every fiber to height 1/2."""
    out = FormalSum.zero()
    for coeff, brane in sum_.items():
        if isinstance(brane, Fiber):
            out = out + coeff * FormalSum.single(fiber_reduce(brane))
        elif isinstance(brane, Section) and not _is_zero_section(brane):
            out = out + coeff * _reduce(surgery_decompose(brane))
        else:
            out = out + coeff * FormalSum.single(brane)
    return out


@dataclass(frozen=True)
class InvariantTuple:
    """Complete cobordism invariant: cycle class, torsion, two Albanese pairs.

    ``torsion`` lives in the 2-torsion subgroup of the coefficient
    group; each Albanese slot is a point of the base circle together
    with a collected monodromy.
    """

    cycle: H2Class
    torsion: GroupElement
    albanese: tuple[CircleValue, GroupElement]
    albanese_prime: tuple[CircleValue, GroupElement]

    @classmethod
    def zero(cls, group: FGAbelianGroup) -> "InvariantTuple":
        sub, _ = n_torsion(group, 2)
        point = (CircleValue(Fraction(0)), group.zero())
        return cls(H2Class(0, 0, 0, 0, 0), sub.zero(), point, point)

    def is_zero(self) -> bool:
        return (
            self.cycle == H2Class(0, 0, 0, 0, 0)
            and self.torsion.is_zero()
            and self.albanese[0].is_zero()
            and self.albanese[1].is_zero()
            and self.albanese_prime[0].is_zero()
            and self.albanese_prime[1].is_zero()
        )

    def __add__(self, other: "InvariantTuple") -> "InvariantTuple":
        if not isinstance(other, InvariantTuple):
            return NotImplemented
        return InvariantTuple(
            self.cycle + other.cycle,
            self.torsion + other.torsion,
            (
                self.albanese[0] + other.albanese[0],
                self.albanese[1] + other.albanese[1],
            ),
            (
                self.albanese_prime[0] + other.albanese_prime[0],
                self.albanese_prime[1] + other.albanese_prime[1],
            ),
        )

    def __neg__(self) -> "InvariantTuple":
        return InvariantTuple(
            -self.cycle,
            -self.torsion,
            (-self.albanese[0], -self.albanese[1]),
            (-self.albanese_prime[0], -self.albanese_prime[1]),
        )

    def __sub__(self, other: "InvariantTuple") -> "InvariantTuple":
        if not isinstance(other, InvariantTuple):
            return NotImplemented
        return self + (-other)


def normal_form(
    sum_: FormalSum, group: FGAbelianGroup | None = None
) -> InvariantTuple:
    """Complete invariant of a brane sum, deciding cobordism equivalence.

    Sections are rewritten through the surgery relation and fibers slid
    to the fixed height; the refined cycle class is read off, the
    reference sum realizing it subtracted, and the kernel remainder
    measured by the two Albanese maps.

    >>> from .abelian import FGAbelianGroup
    >>> G = FGAbelianGroup(free_rank=1, torsion=())
    >>> e = G.zero()
    >>> gamma0 = Section(SectionClass(0, 0, 0, CircleValue(Fraction(0))), e, e)
    >>> nf = normal_form(FormalSum.single(gamma0))
    >>> nf.cycle, nf.torsion.is_zero(), nf.albanese[0].is_zero()
    (H2Class(a=0, b=1, m=0, n=0, l=0), True, True)
    """
    g = _group_of(sum_, group)
    c = cyc(sum_)
    g2 = psi(sum_, g)
    remainder = _reduce(sum_) - _reduce(splitting_section(c, g2, g))
    return InvariantTuple(c, g2, alb_loc(remainder, g), alb_prime_loc(remainder, g))


def is_cobordant(
    a: FormalSum, b: FormalSum, group: FGAbelianGroup | None = None
) -> bool:
    """Whether two brane sums agree in the cobordism group.

    The invariant tuple is complete on the subgroup the preferred branes
    generate, so this is equality of normal forms of the difference.
    """
    return normal_form(a - b, group).is_zero()
