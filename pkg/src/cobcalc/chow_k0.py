"""Chow groups of an algebraic bielliptic surface and its Grothendieck group.

The surface is a free quotient of a product of two elliptic curves, and
its Chow ring splits into small explicit pieces: the fundamental class,
a Neron-Severi part with two free and two 2-torsion divisor generators,
a divisible Picard part, and zero-cycles graded by degree and Albanese
point.  Both elliptic parameters are modeled as a rational circle point
paired with an element of the configured coefficient group, so every
computation is exact and comparisons against the symplectic side are
literal equalities of coordinates.

Geometry pins down only part of the intersection pairing: the squares
of the divisor generators are fixed, while mixed products have to be
supplied as configuration.  The quasi-linear correction feeding the
integral Chern character is assembled from per-block maps and verified
by sampling, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence, Union

from .abelian import CircleValue, FGAbelianGroup, GroupElement

__all__ = [
    "MissingTableEntry",
    "BlockMapNotQuasilinear",
    "EllipticModel",
    "PointClass",
    "DivisorClass",
    "ChowClass",
    "K0Class",
    "IntersectionTable",
    "intersect",
    "build_quasilinear",
    "bielliptic_blocks",
    "chern_correction",
    "chern",
    "h_map",
    "h_inverse",
]

Rational = Union[int, Fraction]


class MissingTableEntry(LookupError):
    """A mixed product of divisor generators was requested but never configured."""


class BlockMapNotQuasilinear(ValueError):
    """A per-block map failed its defining identity on a sampled pair."""


def _circle(value: Union[CircleValue, Rational]) -> CircleValue:
    if isinstance(value, CircleValue):
        return value
    return CircleValue(Fraction(value))


@dataclass(frozen=True)
class EllipticModel:
    """A point of the elliptic parameter: circle position plus group twist.

    Models points of the elliptic curve that appears as both the Picard
    and the Albanese part, as an abelian group under componentwise
    addition.

    >>> from .abelian import FGAbelianGroup
    >>> G = FGAbelianGroup(free_rank=0, torsion=(4,))
    >>> 2 * EllipticModel(Fraction(3, 4), G.element((3,)))
    EllipticModel(angle=CircleValue(value=Fraction(1, 2)), twist=GroupElement(parent=FGAbelianGroup(free_rank=0, torsion=(4,)), coords=(2,)))
    """

    angle: CircleValue
    twist: GroupElement

    def __post_init__(self) -> None:
        object.__setattr__(self, "angle", _circle(self.angle))

    @classmethod
    def zero(cls, group: FGAbelianGroup) -> "EllipticModel":
        return cls(CircleValue(Fraction(0)), group.zero())

    @property
    def parent(self) -> FGAbelianGroup:
        return self.twist.parent

    def is_zero(self) -> bool:
        return self.angle.is_zero() and self.twist.is_zero()

    def __add__(self, other: "EllipticModel") -> "EllipticModel":
        if not isinstance(other, EllipticModel):
            return NotImplemented
        return EllipticModel(self.angle + other.angle, self.twist + other.twist)

    def __neg__(self) -> "EllipticModel":
        return EllipticModel(-self.angle, -self.twist)

    def __sub__(self, other: "EllipticModel") -> "EllipticModel":
        if not isinstance(other, EllipticModel):
            return NotImplemented
        return self + (-other)

    def __mul__(self, k: int) -> "EllipticModel":
        if not isinstance(k, int):
            return NotImplemented
        return EllipticModel(k * self.angle, k * self.twist)

    __rmul__ = __mul__


@dataclass(frozen=True)
class PointClass:
    """A zero-cycle class: degree plus homologically trivial Albanese part."""

    degree: int
    alb: EllipticModel

    def __post_init__(self) -> None:
        if not isinstance(self.degree, int):
            raise ValueError("the degree of a zero-cycle is an integer")

    @classmethod
    def zero(cls, group: FGAbelianGroup) -> "PointClass":
        return cls(0, EllipticModel.zero(group))

    @property
    def parent(self) -> FGAbelianGroup:
        return self.alb.parent

    def is_zero(self) -> bool:
        return self.degree == 0 and self.alb.is_zero()

    def __add__(self, other: "PointClass") -> "PointClass":
        if not isinstance(other, PointClass):
            return NotImplemented
        return PointClass(self.degree + other.degree, self.alb + other.alb)

    def __neg__(self) -> "PointClass":
        return PointClass(-self.degree, -self.alb)

    def __sub__(self, other: "PointClass") -> "PointClass":
        if not isinstance(other, PointClass):
            return NotImplemented
        return self + (-other)

    def __mul__(self, k: int) -> "PointClass":
        if not isinstance(k, int):
            return NotImplemented
        return PointClass(k * self.degree, k * self.alb)

    __rmul__ = __mul__


@dataclass(frozen=True)
class DivisorClass:
    """A divisor class written in the generator basis.

    ``fiber`` counts fibers of the elliptic pencil and ``half_fiber``
    the chosen reduced multiple fiber of the ruling; these two spread
    the free part.  ``tor_a`` and ``tor_b`` are residues over the two
    2-torsion differences of multiple fibers, kept reduced.  ``pic0``
    is the degree-zero part on the Picard torus.
    """

    fiber: int
    half_fiber: int
    tor_a: int
    tor_b: int
    pic0: EllipticModel

    def __post_init__(self) -> None:
        for coord in (self.fiber, self.half_fiber, self.tor_a, self.tor_b):
            if not isinstance(coord, int):
                raise ValueError("divisor coordinates are integers")
        object.__setattr__(self, "tor_a", self.tor_a % 2)
        object.__setattr__(self, "tor_b", self.tor_b % 2)

    @classmethod
    def zero(cls, group: FGAbelianGroup) -> "DivisorClass":
        return cls(0, 0, 0, 0, EllipticModel.zero(group))

    @property
    def parent(self) -> FGAbelianGroup:
        return self.pic0.parent

    def is_zero(self) -> bool:
        return (
            self.fiber == 0
            and self.half_fiber == 0
            and self.tor_a == 0
            and self.tor_b == 0
            and self.pic0.is_zero()
        )

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return DivisorClass(
            self.fiber + other.fiber,
            self.half_fiber + other.half_fiber,
            self.tor_a + other.tor_a,
            self.tor_b + other.tor_b,
            self.pic0 + other.pic0,
        )

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(
            -self.fiber, -self.half_fiber, -self.tor_a, -self.tor_b, -self.pic0
        )

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self + (-other)

    def __mul__(self, k: int) -> "DivisorClass":
        if not isinstance(k, int):
            return NotImplemented
        return DivisorClass(
            k * self.fiber,
            k * self.half_fiber,
            k * self.tor_a,
            k * self.tor_b,
            k * self.pic0,
        )

    __rmul__ = __mul__


@dataclass(frozen=True)
class ChowClass:
    """A full Chow element: fundamental multiple, divisor part, zero-cycles."""

    ch2: int
    ch1: DivisorClass
    ch0: PointClass

    def __post_init__(self) -> None:
        if not isinstance(self.ch2, int):
            raise ValueError("the fundamental coordinate is an integer")
        if self.ch1.parent != self.ch0.parent:
            raise ValueError("divisor and zero-cycle parts must live over one group")

    @classmethod
    def zero(cls, group: FGAbelianGroup) -> "ChowClass":
        return cls(0, DivisorClass.zero(group), PointClass.zero(group))

    @property
    def parent(self) -> FGAbelianGroup:
        return self.ch1.parent

    def is_zero(self) -> bool:
        return self.ch2 == 0 and self.ch1.is_zero() and self.ch0.is_zero()

    def __add__(self, other: "ChowClass") -> "ChowClass":
        if not isinstance(other, ChowClass):
            return NotImplemented
        return ChowClass(self.ch2 + other.ch2, self.ch1 + other.ch1, self.ch0 + other.ch0)

    def __neg__(self) -> "ChowClass":
        return ChowClass(-self.ch2, -self.ch1, -self.ch0)

    def __sub__(self, other: "ChowClass") -> "ChowClass":
        if not isinstance(other, ChowClass):
            return NotImplemented
        return self + (-other)

    def __mul__(self, k: int) -> "ChowClass":
        if not isinstance(k, int):
            return NotImplemented
        return ChowClass(k * self.ch2, k * self.ch1, k * self.ch0)

    __rmul__ = __mul__


@dataclass(frozen=True)
class K0Class:
    """Coordinates in the generator presentation of the Grothendieck group.

    The free coordinates count structure sheaves: ``n1`` the surface
    itself, ``n2`` a reference point, ``n3`` and ``n4`` the two free
    divisor generators.  ``n5`` and ``n6`` are residues over the
    2-torsion divisor generators.  ``p`` parametrizes the Picard family
    of divisor sheaves and ``p_prime`` the Albanese family of
    degree-zero point differences.
    """

    n1: int
    n2: int
    n3: int
    n4: int
    n5: int
    n6: int
    p: EllipticModel
    p_prime: EllipticModel

    def __post_init__(self) -> None:
        for coord in (self.n1, self.n2, self.n3, self.n4, self.n5, self.n6):
            if not isinstance(coord, int):
                raise ValueError("coordinates are integers")
        object.__setattr__(self, "n5", self.n5 % 2)
        object.__setattr__(self, "n6", self.n6 % 2)
        if self.p.parent != self.p_prime.parent:
            raise ValueError("both elliptic parameters must live over one group")

    @classmethod
    def zero(cls, group: FGAbelianGroup) -> "K0Class":
        point = EllipticModel.zero(group)
        return cls(0, 0, 0, 0, 0, 0, point, point)

    @property
    def parent(self) -> FGAbelianGroup:
        return self.p.parent

    def is_zero(self) -> bool:
        return (
            self.n1 == 0
            and self.n2 == 0
            and self.n3 == 0
            and self.n4 == 0
            and self.n5 == 0
            and self.n6 == 0
            and self.p.is_zero()
            and self.p_prime.is_zero()
        )

    def __add__(self, other: "K0Class") -> "K0Class":
        if not isinstance(other, K0Class):
            return NotImplemented
        return K0Class(
            self.n1 + other.n1,
            self.n2 + other.n2,
            self.n3 + other.n3,
            self.n4 + other.n4,
            self.n5 + other.n5,
            self.n6 + other.n6,
            self.p + other.p,
            self.p_prime + other.p_prime,
        )

    def __neg__(self) -> "K0Class":
        return K0Class(
            -self.n1, -self.n2, -self.n3, -self.n4, -self.n5, -self.n6,
            -self.p, -self.p_prime,
        )

    def __sub__(self, other: "K0Class") -> "K0Class":
        if not isinstance(other, K0Class):
            return NotImplemented
        return self + (-other)

    def __mul__(self, k: int) -> "K0Class":
        if not isinstance(k, int):
            return NotImplemented
        return K0Class(
            k * self.n1, k * self.n2, k * self.n3, k * self.n4,
            k * self.n5, k * self.n6, k * self.p, k * self.p_prime,
        )

    __rmul__ = __mul__


# Slot names index the divisor generators; the Picard part is a fifth
# block handled separately because it is a family, not a single class.
_NAMED_SLOTS = ("fiber", "half_fiber", "tor_a", "tor_b")
_TORSION_SLOTS = frozenset(("tor_a", "tor_b"))
_BLOCKS = _NAMED_SLOTS + ("pic0",)


def _is_two_torsion(value: PointClass) -> bool:
    return (2 * value).is_zero()


@dataclass(frozen=True, eq=False)
class IntersectionTable:
    """Symmetric intersection pairing on the divisor generators.

    The squares are fixed by geometry and cannot be configured: every
    generator squares to zero except the half fiber, whose square is
    twice the distinguished half-class ``half_point``.  Mixed products
    of named generators are configuration, keyed by slot pairs; a bare
    integer entry means that many reference points.  Products of the
    Picard part against a named generator are integer multiples of the
    tautological identification with the Albanese, one integer per slot
    under ``pic0_cross``; the Picard part pairs with itself to zero.
    Every product against a 2-torsion generator must be 2-torsion.

    >>> from .abelian import FGAbelianGroup
    >>> G = FGAbelianGroup(free_rank=0, torsion=(2,))
    >>> table = IntersectionTable(G)
    >>> table.square("half_fiber").alb.angle
    CircleValue(value=Fraction(1, 2))
    """

    group: FGAbelianGroup
    half_point: EllipticModel | None = None
    cross: Mapping[tuple[str, str], Union[int, PointClass]] = field(default_factory=dict)
    pic0_cross: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.half_point is None:
            object.__setattr__(
                self,
                "half_point",
                EllipticModel(CircleValue(Fraction(1, 4)), self.group.zero()),
            )
        if self.half_point.parent != self.group:
            raise ValueError("the half-class must live over the table's group")
        if not (4 * self.half_point).is_zero():
            # its double is a generator square, which geometry makes 2-torsion
            raise ValueError("twice the half-class must be 2-torsion")
        normalized: dict[frozenset, PointClass] = {}
        for key, raw in dict(self.cross).items():
            a, b = key
            for slot in (a, b):
                if slot not in _NAMED_SLOTS:
                    raise ValueError(f"unknown divisor slot {slot!r}")
            if a == b:
                raise ValueError("generator squares are fixed and cannot be configured")
            value = (
                PointClass(raw, EllipticModel.zero(self.group))
                if isinstance(raw, int)
                else raw
            )
            if value.parent != self.group:
                raise ValueError("table entries must live over the table's group")
            if (a in _TORSION_SLOTS or b in _TORSION_SLOTS) and not _is_two_torsion(value):
                raise ValueError("products against a 2-torsion generator must be 2-torsion")
            normalized[frozenset((a, b))] = value
        object.__setattr__(self, "cross", normalized)
        picard = dict(self.pic0_cross)
        for slot, scale in picard.items():
            if slot not in _NAMED_SLOTS:
                raise ValueError(f"unknown divisor slot {slot!r}")
            if not isinstance(scale, int):
                raise ValueError("Picard pairings are integer scalings")
            if slot in _TORSION_SLOTS and scale != 0:
                # a divisible family pairs with a 2-torsion class only trivially
                raise ValueError("the Picard part pairs with a torsion generator only trivially")
        object.__setattr__(self, "pic0_cross", picard)

    def square(self, slot: str) -> PointClass:
        if slot not in _NAMED_SLOTS:
            raise ValueError(f"unknown divisor slot {slot!r}")
        if slot == "half_fiber":
            return PointClass(0, 2 * self.half_point)
        return PointClass.zero(self.group)

    def mixed(self, a: str, b: str) -> PointClass:
        if a == b:
            return self.square(a)
        try:
            return self.cross[frozenset((a, b))]
        except KeyError:
            raise MissingTableEntry(
                f"no product configured for {a} and {b}"
            ) from None

    def picard_scale(self, slot: str) -> int:
        try:
            return self.pic0_cross[slot]
        except KeyError:
            raise MissingTableEntry(
                f"no product configured for the Picard part and {slot}"
            ) from None


def _named_coords(v: DivisorClass) -> tuple[tuple[str, int], ...]:
    return (
        ("fiber", v.fiber),
        ("half_fiber", v.half_fiber),
        ("tor_a", v.tor_a),
        ("tor_b", v.tor_b),
    )


def intersect(u: DivisorClass, v: DivisorClass, table: IntersectionTable) -> PointClass:
    """Bilinear extension of the configured pairing to divisor classes.

    Torsion coordinates enter through their residues, which is well
    defined because every product against a torsion generator is
    required to be 2-torsion.  Only products with nonzero coefficients
    are looked up, so unconfigured entries hurt only when actually
    needed.
    """
    if u.parent != table.group or v.parent != table.group:
        raise ValueError("divisor classes must live over the table's group")
    total = PointClass.zero(table.group)
    uc = _named_coords(u)
    vc = _named_coords(v)
    for si, ci in uc:
        if ci == 0:
            continue
        for sj, cj in vc:
            if cj == 0:
                continue
            total = total + (ci * cj) * table.mixed(si, sj)
    if not u.pic0.is_zero():
        for sj, cj in vc:
            if cj:
                total = total + PointClass(0, (cj * table.picard_scale(sj)) * u.pic0)
    if not v.pic0.is_zero():
        for si, ci in uc:
            if ci:
                total = total + PointClass(0, (ci * table.picard_scale(si)) * v.pic0)
    # the Picard part against itself is pinned to zero
    return total


BlockMap = Callable[[DivisorClass], PointClass]
Pairing = Callable[[DivisorClass, DivisorClass], PointClass]


def _block_projections(v: DivisorClass) -> tuple[DivisorClass, ...]:
    zero = EllipticModel.zero(v.parent)
    return (
        DivisorClass(v.fiber, 0, 0, 0, zero),
        DivisorClass(0, v.half_fiber, 0, 0, zero),
        DivisorClass(0, 0, v.tor_a, 0, zero),
        DivisorClass(0, 0, 0, v.tor_b, zero),
        DivisorClass(0, 0, 0, 0, v.pic0),
    )


def _block_samples(group: FGAbelianGroup) -> tuple[tuple[DivisorClass, ...], ...]:
    zero = EllipticModel.zero(group)
    ints = (-2, -1, 0, 1, 3)
    points = [zero, EllipticModel(Fraction(1, 4), group.zero())]
    points.extend(EllipticModel(Fraction(1, 3), g) for g in group.generators())
    return (
        tuple(DivisorClass(k, 0, 0, 0, zero) for k in ints),
        tuple(DivisorClass(0, k, 0, 0, zero) for k in ints),
        tuple(DivisorClass(0, 0, r, 0, zero) for r in (0, 1)),
        tuple(DivisorClass(0, 0, 0, r, zero) for r in (0, 1)),
        tuple(DivisorClass(0, 0, 0, 0, pt) for pt in points),
    )


def build_quasilinear(
    blocks: Sequence[BlockMap], product: Pairing, group: FGAbelianGroup
) -> BlockMap:
    """Assemble a quasi-linear map on divisors from per-block maps.

    Each block map must satisfy H(a + b) = H(a) + H(b) + a.b inside its
    own block; that identity is spot-checked on a deterministic sample
    and a failure raises BlockMapNotQuasilinear.  The assembled map adds
    the mixed products of distinct blocks, which extends the identity to
    arbitrary pairs of divisors.
    """
    blocks = tuple(blocks)
    if len(blocks) != len(_BLOCKS):
        raise ValueError("expected one block map per divisor slot")
    for name, h, samples in zip(_BLOCKS, blocks, _block_samples(group)):
        for a in samples:
            for b in samples:
                if h(a + b) != h(a) + h(b) + product(a, b):
                    raise BlockMapNotQuasilinear(
                        f"block map on the {name} slot fails the identity"
                    )

    def extended(v: DivisorClass) -> PointClass:
        parts = _block_projections(v)
        total = PointClass.zero(group)
        for h, part in zip(blocks, parts):
            total = total + h(part)
        for i in range(len(parts)):
            if parts[i].is_zero():
                continue
            for j in range(i + 1, len(parts)):
                if not parts[j].is_zero():
                    total = total + product(parts[i], parts[j])
        return total

    return extended


def bielliptic_blocks(table: IntersectionTable) -> tuple[BlockMap, ...]:
    """Block maps of the integral Chern character on the divisor slots.

    Zero on every slot whose generator squares to zero; the half fiber
    squares its coefficient into the half-class, the quadratic seed that
    makes the correction a genuine lift of c1-squared over two.
    """

    def vanish(_: DivisorClass) -> PointClass:
        return PointClass.zero(table.group)

    def half(v: DivisorClass) -> PointClass:
        return PointClass(0, (v.half_fiber ** 2) * table.half_point)

    return (vanish, half, vanish, vanish, vanish)


def chern_correction(table: IntersectionTable) -> BlockMap:
    """The quasi-linear map sitting inside the integral Chern character."""

    def pairing(u: DivisorClass, v: DivisorClass) -> PointClass:
        return intersect(u, v, table)

    return build_quasilinear(bielliptic_blocks(table), pairing, table.group)


def chern(
    rank: int, c1: DivisorClass, c2: PointClass, table: IntersectionTable
) -> ChowClass:
    """Integral Chern character rank + c1 + (H(c1) - c2) of a sheaf class.

    The zero-cycle slot keeps the Chern-class sign convention: the
    skyscraper sheaf of a point has second Chern class minus the point,
    and comes out with zero-cycle part plus the point.

    >>> from .abelian import FGAbelianGroup
    >>> G = FGAbelianGroup(free_rank=0, torsion=(4,))
    >>> table = IntersectionTable(G)
    >>> point = PointClass(1, EllipticModel(Fraction(1, 3), G.element((1,))))
    >>> chern(0, DivisorClass.zero(G), -point, table).ch0 == point
    True
    """
    if c1.parent != table.group or c2.parent != table.group:
        raise ValueError("Chern data must live over the table's group")
    correction = chern_correction(table)
    return ChowClass(rank, c1, correction(c1) - c2)


def h_map(k: K0Class, table: IntersectionTable) -> ChowClass:
    """Chern character of the generator combination a K0 class encodes.

    Free coordinates land on the fundamental class, the reference
    point, and the two free divisor generators; torsion coordinates on
    the 2-torsion generators; the elliptic parameters fill the Picard
    and Albanese slots.  The half fiber drags one half-class per copy
    into the zero-cycle slot, the single spot where the identification
    is not the identity.

    >>> from .abelian import FGAbelianGroup
    >>> G = FGAbelianGroup(free_rank=0, torsion=(2,))
    >>> table = IntersectionTable(G)
    >>> z = EllipticModel.zero(G)
    >>> h_map(K0Class(0, 0, 0, 1, 0, 0, z, z), table).ch0.alb == table.half_point
    True
    """
    if k.parent != table.group:
        raise ValueError("the class must live over the table's group")
    ch1 = DivisorClass(k.n3, k.n4, k.n5, k.n6, k.p)
    ch0 = PointClass(k.n2, k.p_prime + k.n4 * table.half_point)
    return ChowClass(k.n1, ch1, ch0)


def h_inverse(c: ChowClass, table: IntersectionTable) -> K0Class:
    """Inverse of h_map; exists because the change of basis is triangular."""
    if c.parent != table.group:
        raise ValueError("the class must live over the table's group")
    n4 = c.ch1.half_fiber
    return K0Class(
        c.ch2,
        c.ch0.degree,
        c.ch1.fiber,
        n4,
        c.ch1.tor_a,
        c.ch1.tor_b,
        c.ch1.pic0,
        c.ch0.alb - n4 * table.half_point,
    )
