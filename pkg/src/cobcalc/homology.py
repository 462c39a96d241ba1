"""Twisted homology of the fibered bielliptic total space.

The total space fibers over a tropical Klein bottle, and the relevant
coefficient system is the pullback of the base orientation bundle.  The
second homology is assembled by Mayer-Vietoris along two vertical
annular charts of the base: the overlap inclusion matrices are fixed
integer data (the coefficient twist flips exactly one fiber direction
per degree), and kernels, cokernels and the final splitting are computed
from Smith normal form.  A convention drift anywhere in that pipeline
raises InternalInconsistency instead of silently changing the answer.

Degree-three information is needed only through its two-torsion and a
projection to the base circle classes; both are exposed here so the
monodromy bookkeeping downstream shares one wall convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from cobcalc.abelian import (
    FGAbelianGroup,
    GroupElement,
    GroupHom,
    IntegerMatrix,
    cokernel_presentation,
    kernel_basis,
)
from cobcalc.tropical import SectionClass

__all__ = [
    "InternalInconsistency",
    "TwistedH2",
    "H2Class",
    "compute_h2_twisted",
    "class_of_section",
    "class_of_fiber",
    "class_of_lift_x",
    "class_of_lift_y",
    "h3_two_torsion",
    "h3_to_h1_projection",
    "TORSION_WALL_X",
]


class InternalInconsistency(RuntimeError):
    """The homology pipeline produced something other than the known answer."""


# x-position of the vertical circle whose fiber preimage represents the
# generator of the two-torsion of degree-three homology; the monodromy
# functional is evaluated against this fixed wall
TORSION_WALL_X = Fraction(1, 2)

GENERATOR_NAMES = (
    "fiber",
    "zero_section",
    "vertical_conormal",
    "horizontal_conormal",
    "horizontal_conormal_difference",
)

# Overlap inclusions for the two vertical annular charts.  Each chart and
# each overlap component carries three generators per degree; passing the
# orientation-reversing wrap combines a geometric sign with the
# coefficient sign, leaving a single flipped slot per degree.
#
# Degree 2: per-component generators (fiber, cotangent circle, conormal
# circle); the cotangent class flips through the wrap.
_H2_INCLUSIONS = IntegerMatrix.from_rows((
    (1, 0, 0, 1, 0, 0),
    (0, 1, 0, 0, -1, 0),
    (0, 0, 1, 0, 0, 1),
    (1, 0, 0, 1, 0, 0),
    (0, 1, 0, 0, 1, 0),
    (0, 0, 1, 0, 0, 1),
))
# Degree 1: per-component generators (horizontal fiber cycle, vertical
# fiber cycle, core circle of the annulus); the horizontal fiber cycle
# flips through the wrap.
_H1_INCLUSIONS = IntegerMatrix.from_rows((
    (1, 0, 0, -1, 0, 0),
    (0, 1, 0, 0, 1, 0),
    (0, 0, 1, 0, 0, 1),
    (1, 0, 0, 1, 0, 0),
    (0, 1, 0, 0, 1, 0),
    (0, 0, 1, 0, 0, 1),
))

# kernel generators of the degree-1 inclusion map named in the splitting:
# the difference of the vertical fiber cycles maps to the zero-section,
# the difference of the core circles to the horizontal conormal lift
_VERTICAL_FIBER_DIFFERENCE = (0, 1, 0, 0, -1, 0)
_CORE_CIRCLE_DIFFERENCE = (0, 0, 1, 0, 0, -1)


@dataclass(frozen=True)
class H2Class:
    """Coordinates of a middle-homology class in the named generator basis.

    ``(a, b, m, n)`` count fibers, zero-sections, vertical conormal lifts
    and horizontal conormal lifts; ``l`` is the two-torsion residue.
    """

    a: int
    b: int
    m: int
    n: int
    l: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "l", self.l % 2)

    def __add__(self, other: "H2Class") -> "H2Class":
        return H2Class(
            self.a + other.a,
            self.b + other.b,
            self.m + other.m,
            self.n + other.n,
            self.l + other.l,
        )

    def __mul__(self, k: int) -> "H2Class":
        if not isinstance(k, int):
            return NotImplemented
        return H2Class(k * self.a, k * self.b, k * self.m, k * self.n, k * self.l)

    __rmul__ = __mul__

    def __neg__(self) -> "H2Class":
        return (-1) * self


@dataclass(frozen=True)
class TwistedH2:
    """The computed twisted middle homology with named generators.

    ``chart_quotient`` and ``overlap_kernel`` retain the two sides of the
    split extension the group was assembled from, for auditability.
    """

    group: FGAbelianGroup
    generators: tuple[str, ...]
    chart_quotient: FGAbelianGroup
    overlap_kernel: FGAbelianGroup

    def __post_init__(self) -> None:
        if self.group != FGAbelianGroup(free_rank=4, torsion=(2,)):
            raise InternalInconsistency("middle homology must be Z^4 + Z/2")
        if self.generators != GENERATOR_NAMES:
            raise InternalInconsistency("unexpected generator names")

    def element_of(self, cls: H2Class) -> GroupElement:
        """The group element of a coordinate class; order (a, b, m, n | l)."""
        return self.group.element((cls.a, cls.b, cls.m, cls.n, cls.l))

    def basis_element(self, name: str) -> GroupElement:
        return self.group.generator(self.generators.index(name))


def _integer_combination(
    vectors: tuple[tuple[int, ...], ...], target: tuple[int, ...]
) -> bool:
    """Whether target is an integer combination of the given vectors."""
    rows = [[Fraction(v[i]) for v in vectors] + [Fraction(target[i])] for i in range(len(target))]
    ncols = len(vectors)
    pivot_row = 0
    for col in range(ncols):
        pivot = next((r for r in range(pivot_row, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
        lead = rows[pivot_row][col]
        rows[pivot_row] = [x / lead for x in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col]:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[pivot_row])]
        pivot_row += 1
    # consistent iff no row reduces to (0 ... 0 | nonzero); integral iff the
    # pivot solutions are integers
    for r in range(len(rows)):
        if all(x == 0 for x in rows[r][:ncols]) and rows[r][ncols] != 0:
            return False
        if any(rows[r][:ncols]) and rows[r][ncols].denominator != 1:
            return False
    return True


def _span_equals(basis: tuple[tuple[int, ...], ...], expected: tuple[tuple[int, ...], ...]) -> bool:
    """Whether two integer generating sets span the same sublattice."""
    return all(_integer_combination(basis, v) for v in expected) and all(
        _integer_combination(expected, v) for v in basis
    )


def compute_h2_twisted() -> TwistedH2:
    """Run the Mayer-Vietoris pipeline and assemble the middle homology.

    The extension splits: the quotient of the chart groups by the overlap
    image contributes the fiber, the vertical conormal lift and the
    two-torsion class, while the kernel of the degree-one overlap map
    contributes the zero-section and the horizontal conormal lift.

    >>> compute_h2_twisted().group
    FGAbelianGroup(free_rank=4, torsion=(2,))
    """
    pres = cokernel_presentation(_H2_INCLUSIONS)
    quotient = pres.group
    if quotient != FGAbelianGroup(free_rank=2, torsion=(2,)):
        raise InternalInconsistency(f"chart quotient came out as {quotient}")

    # provenance of the quotient part: images of the first chart's fiber,
    # cotangent and conormal generators
    fiber = pres.project((1, 0, 0, 0, 0, 0))
    cotangent = pres.project((0, 1, 0, 0, 0, 0))
    conormal = pres.project((0, 0, 1, 0, 0, 0))
    free_block = IntegerMatrix.from_columns(
        (fiber.coords[:2], conormal.coords[:2])
    )
    if abs(free_block.determinant()) != 1:
        raise InternalInconsistency("fiber and conormal do not span the free part")
    if cotangent.coords[:2] != (0, 0) or cotangent.coords[2] % 2 != 1:
        raise InternalInconsistency("cotangent class is not the torsion generator")

    kernel = kernel_basis(_H1_INCLUSIONS)
    if kernel.cols != 2:
        raise InternalInconsistency(f"overlap kernel has rank {kernel.cols}")
    kernel_vectors = tuple(kernel.column(j) for j in range(kernel.cols))
    if not _span_equals(
        kernel_vectors, (_VERTICAL_FIBER_DIFFERENCE, _CORE_CIRCLE_DIFFERENCE)
    ):
        raise InternalInconsistency("overlap kernel has unexpected generators")

    return TwistedH2(
        group=FGAbelianGroup(free_rank=4, torsion=(2,)),
        generators=GENERATOR_NAMES,
        chart_quotient=quotient,
        overlap_kernel=FGAbelianGroup(free_rank=2, torsion=()),
    )


def class_of_section(s: SectionClass) -> H2Class:
    """Homology class of the graph of a section; independent of theta.

    >>> from cobcalc.abelian import CircleValue
    >>> class_of_section(SectionClass(2, 3, 1, CircleValue(Fraction(1, 4))))
    H2Class(a=6, b=1, m=2, n=3, l=1)
    """
    return H2Class(s.m * s.n, 1, s.m, s.n, s.l)


def class_of_fiber() -> H2Class:
    return H2Class(1, 0, 0, 0, 0)


def class_of_lift_x(m: int) -> H2Class:
    """Class of m parallel conormal lifts of vertical circles."""
    return H2Class(0, 0, m, 0, 0)


def class_of_lift_y(n: int, l: int) -> H2Class:
    """Class of n horizontal conormal lifts plus l torsion differences."""
    return H2Class(0, 0, 0, n, l)


def h3_two_torsion() -> FGAbelianGroup:
    """The two-torsion of degree-three twisted homology: cyclic of order 2.

    Its generator is represented by the fiber preimage of the vertical
    circle at x = TORSION_WALL_X, the wall the monodromy functional
    pairs against.
    """
    return FGAbelianGroup(free_rank=0, torsion=(2,))


def h3_to_h1_projection() -> GroupHom:
    """Projection of degree-three twisted homology onto base circle classes.

    The domain is modeled on the split filtration: slot 0 is generated by
    the zero-section swept along a fiber geodesic, slots 1 and 2 by the
    fiber preimages of base cycles.  The projection sends the swept class
    to the free base circle generator and kills the fiberwise part.

    >>> pr = h3_to_h1_projection()
    >>> pr(pr.domain.generator(0)).coords
    (1, 0)
    >>> pr(pr.domain.generator(1)).is_zero()
    True
    """
    domain = FGAbelianGroup(free_rank=2, torsion=(2,))
    codomain = FGAbelianGroup(free_rank=1, torsion=(2,))
    matrix = IntegerMatrix.from_rows(((1, 0, 0), (0, 0, 0)))
    return GroupHom(domain, codomain, matrix)
