"""Dictionary between Klein-base branes and sheaf classes on the mirror.

Each preferred brane shape corresponds to a generator of the
Grothendieck group of the algebraic bielliptic surface: decorated
zero-sections to multiples of the structure sheaf, fibers to skyscraper
classes with their Albanese point, vertical lifts to the fiber divisor
with a Picard coordinate, and horizontal lifts to the half-fiber
divisor together with both torsion slots.  The dictionary is a finite
lookup extended linearly, entirely independent of the normal-form
machinery; comparing the two routes through the generator presentation
of the Grothendieck group is the content of verify_isomorphism.

Two conventions are decisions, not consequences: a parity-flipped brane
maps to the negative of its class, and the coefficient group must have
2-torsion of order exactly two so that the torsion slots on the two
sides can be identified at all.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .abelian import (
    CircleValue,
    FGAbelianGroup,
    FormalSum,
    GroupElement,
    n_torsion,
)
from .chow_k0 import (
    ChowClass,
    EllipticModel,
    IntersectionTable,
    K0Class,
    h_map,
)
from .cob_biell import (
    Brane,
    Fiber,
    InvariantTuple,
    LiftX,
    LiftY,
    Section,
    normal_form,
    splitting_section,
    two_torsion_part,
)
from .homology import H2Class
from .tropical import SectionClass

__all__ = [
    "NotInGeneratorSet",
    "MirrorDictionary",
    "MirrorReport",
    "mirror_class",
    "coordinate_change",
    "coordinate_change_inverse",
    "verify_isomorphism",
    "generator_grid",
    "random_generator_sums",
]


class NotInGeneratorSet(ValueError):
    """The sum uses a brane, or a coefficient group, the dictionary cannot see."""


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


def _torsion_coordinate(value: GroupElement, group: FGAbelianGroup) -> int:
    return two_torsion_part(value, group).coords[0]


@dataclass(frozen=True)
class MirrorDictionary:
    """Finite lookup from generator branes to Grothendieck-group classes.

    Total on the generating set: fibers, vertical and horizontal lifts,
    and zero-sections with two-torsion decoration and either parity.
    Any other section must be rewritten through the surgery relation
    before lookup.  The coefficient group must have 2-torsion of order
    exactly two, the rank of the torsion slot on the sheaf side.
    """

    group: FGAbelianGroup

    def __post_init__(self) -> None:
        sub, _ = n_torsion(self.group, 2)
        if sub.torsion != (2,):
            raise NotInGeneratorSet(
                "the coefficient group needs 2-torsion of order exactly two"
            )

    def image(self, brane: Brane) -> K0Class:
        """The sheaf class of a single generator brane."""
        zero = EllipticModel.zero(self.group)
        if isinstance(brane, Fiber):
            # the skyscraper point sees the doubled base position and the
            # x-monodromy; height and y-monodromy are cobordism slack
            point = EllipticModel(CircleValue(2 * brane.base[0]), brane.mono_x)
            return K0Class(0, 1, 0, 0, 0, 0, zero, point)
        if isinstance(brane, LiftX):
            picard = zero
            for pos, nu in brane.circles:
                picard = picard + EllipticModel(CircleValue(2 * pos.value), nu)
            return K0Class(0, 0, len(brane.circles), 0, 0, 0, picard, zero)
        if isinstance(brane, LiftY):
            total = 0
            at_zero = 0
            crossing = self.group.zero()
            for pos, weight, nu in brane.circles:
                total += weight
                if pos.value == 0:
                    at_zero += weight
                crossing = crossing + weight * nu
            twist = _torsion_coordinate(crossing, self.group)
            return K0Class(0, 0, 0, total, at_zero, twist, zero, zero)
        if isinstance(brane, Section):
            profile = brane.profile
            if (
                profile.m
                or profile.n
                or profile.l
                or not profile.theta.is_zero()
                or not brane.eta_z.is_zero()
            ):
                raise NotInGeneratorSet(
                    "a bent or free-decorated section is not a generator; "
                    "rewrite it through the surgery relation first"
                )
            twist = _torsion_coordinate(brane.eta_z2, self.group)
            return brane.parity * K0Class(1, 0, 0, 0, 0, twist, zero, zero)
        raise NotInGeneratorSet(f"not a brane: {brane!r}")


def mirror_class(sum_: FormalSum, group: FGAbelianGroup | None = None) -> K0Class:
    """Linear extension of the generator dictionary to a formal sum.

    >>> from .abelian import FGAbelianGroup, FormalSum
    >>> from .tropical import SectionClass
    >>> G = FGAbelianGroup(free_rank=0, torsion=(2,))
    >>> e = G.zero()
    >>> gamma0 = Section(SectionClass(0, 0, 0, CircleValue(Fraction(0))), e, e)
    >>> mirror_class(FormalSum.single(gamma0)).n1
    1
    """
    g = _group_of(sum_, group)
    dictionary = MirrorDictionary(g)
    total = K0Class.zero(g)
    for coeff, brane in sum_.items():
        total = total + coeff * dictionary.image(brane)
    return total


def coordinate_change(t: InvariantTuple, group: FGAbelianGroup) -> K0Class:
    """The frozen basis match between invariant tuples and sheaf coordinates.

    Fiber and section counts swap into skyscraper and structure-sheaf
    coordinates, the two lift counts pass to the free divisor slots, the
    parity weight and the monodromy functional to the torsion slots, and
    the Albanese pairs fill the two elliptic parameters crosswise.  The
    free part is a permutation matrix, so the map is invertible over the
    integers; it is fixed once by the generator match and never tuned.
    """
    sub, _ = n_torsion(group, 2)
    if sub.torsion != (2,):
        raise NotInGeneratorSet(
            "the coefficient group needs 2-torsion of order exactly two"
        )
    if t.albanese[1].parent != group or t.albanese_prime[1].parent != group:
        raise ValueError("the tuple must live over the given group")
    cycle = t.cycle
    return K0Class(
        cycle.b,
        cycle.a,
        cycle.m,
        cycle.n,
        cycle.l,
        two_torsion_part(t.torsion, group).coords[0],
        EllipticModel(t.albanese_prime[0], t.albanese_prime[1]),
        EllipticModel(t.albanese[0], t.albanese[1]),
    )


def coordinate_change_inverse(k: K0Class, group: FGAbelianGroup) -> InvariantTuple:
    """Inverse basis match, undoing coordinate_change slot by slot."""
    sub, _ = n_torsion(group, 2)
    if sub.torsion != (2,):
        raise NotInGeneratorSet(
            "the coefficient group needs 2-torsion of order exactly two"
        )
    if k.parent != group:
        raise ValueError("the class must live over the given group")
    return InvariantTuple(
        H2Class(k.n2, k.n1, k.n3, k.n4, k.n5),
        sub.element((k.n6,)),
        (k.p_prime.angle, k.p_prime.twist),
        (k.p.angle, k.p.twist),
    )


@dataclass(frozen=True)
class MirrorReport:
    """Outcome of a dual-route comparison over a grid of brane sums."""

    checked: int
    mismatches: tuple[tuple[FormalSum, ChowClass, ChowClass], ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify_isomorphism(
    grid: Iterable[FormalSum], table: IntersectionTable
) -> MirrorReport:
    """Compare the dictionary route with the normal-form route on a grid.

    For every sum, the sheaf class from the generator dictionary and
    the invariant tuple from the normal-form pipeline are pushed into
    the Chow model through the generator presentation; any inequality
    is recorded.  The two routes share no computation beyond the brane
    data itself.
    """
    group = table.group
    mismatches = []
    checked = 0
    for sum_ in grid:
        checked += 1
        direct = h_map(mirror_class(sum_, group), table)
        reduced = h_map(coordinate_change(normal_form(sum_, group), group), table)
        if direct != reduced:
            mismatches.append((sum_, direct, reduced))
    return MirrorReport(checked, tuple(mismatches))


def generator_grid(group: FGAbelianGroup) -> tuple[FormalSum, ...]:
    """The standard generating sums over sample positions and monodromies.

    Fibers and vertical lifts run over a few rational positions and a
    generating set of monodromies, horizontal lifts over both heights
    and the 2-torsion decorations, zero-sections over decorations and
    parities, and the reference sums realizing a basis of invariant
    tuples close the list.  The empty sum rides along as the zero case.
    """
    sub, include = n_torsion(group, 2)
    if sub.torsion != (2,):
        raise NotInGeneratorSet(
            "the coefficient group needs 2-torsion of order exactly two"
        )
    zero = group.zero()
    origin = CircleValue(Fraction(0))
    half = CircleValue(Fraction(1, 2))
    z2 = include(sub.generator(0))
    monodromies = (zero,) + group.generators()

    branes: list[Brane] = []
    for x in (Fraction(0), Fraction(1, 4), Fraction(1, 3)):
        for mono in monodromies:
            branes.append(Fiber((x, Fraction(1, 2)), mono, zero))
            branes.append(LiftX(((CircleValue(x), mono),), sub.zero()))
    branes.append(Fiber((Fraction(1, 8), Fraction(1, 4)), zero, z2))
    branes.append(LiftX(((CircleValue(Fraction(1, 8)), zero),), sub.generator(0)))
    branes.append(
        LiftX(
            ((CircleValue(Fraction(0)), zero), (CircleValue(Fraction(1, 4)), z2)),
            sub.zero(),
        )
    )
    for height in (origin, half):
        for nu in (zero, z2):
            branes.append(LiftY(((height, 1, nu),)))
        branes.append(LiftY(((height, -2, zero),)))
    branes.append(LiftY(((origin, -1, zero), (half, 1, z2))))
    trivial = SectionClass(0, 0, 0, origin)
    for decoration in (sub.zero(), sub.generator(0)):
        for parity in (1, -1):
            branes.append(Section(trivial, zero, decoration, parity))

    sums = [FormalSum.zero()]
    sums.extend(FormalSum.single(brane) for brane in branes)
    units = (
        H2Class(1, 0, 0, 0, 0),
        H2Class(0, 1, 0, 0, 0),
        H2Class(0, 0, 1, 0, 0),
        H2Class(0, 0, 0, 1, 0),
        H2Class(0, 0, 0, 0, 1),
    )
    for unit in units:
        sums.append(splitting_section(unit, sub.zero(), group))
    sums.append(splitting_section(H2Class(0, 0, 0, 0, 0), sub.generator(0), group))
    return tuple(sums)


def random_generator_sums(
    group: FGAbelianGroup, count: int, seed: int
) -> tuple[FormalSum, ...]:
    """Deterministic random combinations of generators for stress checks.

    Each sum mixes up to four generator branes with small coefficients
    and random rational positions; the draw is reproducible from the
    seed alone.
    """
    rng = random.Random(seed)
    sub, include = n_torsion(group, 2)
    if sub.torsion != (2,):
        raise NotInGeneratorSet(
            "the coefficient group needs 2-torsion of order exactly two"
        )
    zero = group.zero()
    monodromies = (zero,) + group.generators()
    decorations = tuple(sub.elements())
    trivial = SectionClass(0, 0, 0, CircleValue(Fraction(0)))

    def position() -> Fraction:
        den = rng.choice((3, 4, 5, 8))
        return Fraction(rng.randrange(0, den), den)

    def draw() -> Brane:
        kind = rng.randrange(4)
        if kind == 0:
            return Fiber(
                (position(), position()), rng.choice(monodromies), include(rng.choice(decorations))
            )
        if kind == 1:
            return LiftX(
                ((CircleValue(position()), rng.choice(monodromies)),),
                rng.choice(decorations),
            )
        if kind == 2:
            height = rng.choice((Fraction(0), Fraction(1, 2)))
            weight = rng.choice((-2, -1, 1, 2))
            return LiftY(((CircleValue(height), weight, include(rng.choice(decorations))),))
        return Section(
            trivial, zero, rng.choice(decorations), rng.choice((1, -1))
        )

    sums = []
    for _ in range(count):
        terms = tuple(
            (rng.choice((-2, -1, 1, 2)), draw())
            for _ in range(rng.randint(1, 4))
        )
        sums.append(FormalSum.of(*terms))
    return tuple(sums)
