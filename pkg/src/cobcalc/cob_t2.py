"""The Lagrangian cobordism group of the 2-torus with local systems.

Generators are straight-line Lagrangians with rational positions,
equipped with monodromy data in a configured abelian group; arbitrary
embedded curves reduce to these by iterated surgery.  The group
splits (after fixing the two reference lines through 0) as homology
class, flux, and total monodromy, and two formal sums are cobordant
exactly when those three agree.  The torus area is normalized to 1, so
flux lives on the standard circle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from cobcalc.abelian import CircleValue, FGAbelianGroup, FormalSum, GroupElement

__all__ = [
    "NotNullHomologous",
    "CircleBrane",
    "T2Class",
    "flux",
    "normal_form_t2",
    "is_cobordant_t2",
]


class NotNullHomologous(ValueError):
    """Flux is only defined on sums with vanishing total homology class."""


Direction = Literal["horizontal", "vertical"]


@dataclass(frozen=True)
class CircleBrane:
    """An oriented straight-line Lagrangian with a local system.

    Horizontal branes sit at a fixed second coordinate, vertical branes
    at a fixed first coordinate; ``sign`` is the orientation relative to
    the standard one, and ``monodromy`` is the holonomy of the local
    system along the brane's oriented core circle.
    """

    direction: Direction
    position: CircleValue
    monodromy: GroupElement
    sign: int = 1

    def __post_init__(self) -> None:
        if self.direction not in ("horizontal", "vertical"):
            raise ValueError("direction must be 'horizontal' or 'vertical'")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def reversed(self) -> "CircleBrane":
        return CircleBrane(self.direction, self.position, self.monodromy, -self.sign)


@dataclass(frozen=True)
class T2Class:
    """Complete cobordism invariant: homology class, flux, monodromy."""

    homology: tuple[int, int]
    flux: CircleValue
    monodromy: GroupElement

    def is_zero(self) -> bool:
        return self.homology == (0, 0) and self.flux.is_zero() and self.monodromy.is_zero()


def _homology(sum_: FormalSum) -> tuple[int, int]:
    h = v = 0
    for coeff, brane in sum_.items():
        if brane.direction == "horizontal":
            h += coeff * brane.sign
        else:
            v += coeff * brane.sign
    return h, v


def flux(sum_: FormalSum) -> CircleValue:
    """Signed area swept against the reference lines, on the unit circle.

    The bounding 2-chain of a null-homologous collection of lines is a
    union of straight bands; its area reduces to minus the signed sum of
    positions.  The orientation conventions are those making a
    horizontal pair at heights 0 and theta cobordant to a vertical pair
    at any positions b and b + theta; both then have flux theta.

    >>> from fractions import Fraction
    >>> G = FGAbelianGroup(free_rank=1, torsion=())
    >>> hor = lambda a: CircleBrane("horizontal", CircleValue(Fraction(a)), G.zero())
    >>> flux(FormalSum.of((1, hor(0)), (-1, hor(Fraction(1, 3)))))
    CircleValue(value=Fraction(1, 3))
    """
    if _homology(sum_) != (0, 0):
        raise NotNullHomologous(f"total homology class is {_homology(sum_)}")
    total = Fraction(0)
    for coeff, brane in sum_.items():
        total -= coeff * brane.sign * brane.position.value
    return CircleValue(total)


def normal_form_t2(sum_: FormalSum, group: FGAbelianGroup | None = None) -> T2Class:
    """The complete invariant of a formal sum of straight-line branes.

    Flux is measured against the reference splitting (both reference
    lines through 0 with trivial systems), so it is defined for every
    homology class; monodromy is the signed product of the brane
    holonomies.  Two sums are cobordant iff their T2Classes agree.

    >>> G = FGAbelianGroup(free_rank=0, torsion=(4,))
    >>> brane = CircleBrane("horizontal", CircleValue(Fraction(0)), G.generator(0))
    >>> nf = normal_form_t2(FormalSum.single(brane))
    >>> nf.homology, nf.flux.is_zero(), nf.monodromy
    ((1, 0), True, GroupElement(parent=FGAbelianGroup(free_rank=0, torsion=(4,)), coords=(1,)))
    """
    if group is None:
        branes = sum_.support()
        if not branes:
            raise ValueError("group is required for the empty sum")
        group = branes[0].monodromy.parent
    h, v = _homology(sum_)
    reference = FormalSum.of(
        (h, CircleBrane("horizontal", CircleValue(Fraction(0)), group.zero())),
        (v, CircleBrane("vertical", CircleValue(Fraction(0)), group.zero())),
    )
    phi = flux(sum_ - reference)
    monodromy = group.zero()
    for coeff, brane in sum_.items():
        monodromy = monodromy + (coeff * brane.sign) * brane.monodromy
    return T2Class((h, v), phi, monodromy)


def is_cobordant_t2(a: FormalSum, b: FormalSum, group: FGAbelianGroup | None = None) -> bool:
    """Whether two formal sums of straight-line branes are cobordant."""
    return normal_form_t2(a, group) == normal_form_t2(b, group)
