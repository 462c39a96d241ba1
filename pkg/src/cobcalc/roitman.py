"""Isotropic-subspace dimension bounds for block sums of alternating forms.

A graded rational vector space carries one nonzero alternating q-form
per block, pulled back along the block projections and summed.  Any
subspace isotropic for the summed form has codimension at least the
number of blocks; for symplectic planes this specializes to the middle
bound dim W <= dim V / 2.  The bound is verified empirically here: the
module builds the forms exactly over the rationals, tests isotropy on
basis tuples, and grows random isotropic subspaces by greedy extension
from a seed, so any violation ever found is reproducible.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

Rational = Union[int, Fraction]

__all__ = [
    "ZeroBlockForm",
    "DimensionMismatch",
    "NotIsotropic",
    "GradedSpace",
    "AlternatingForm",
    "Subspace",
    "summed_pullback",
    "is_isotropic",
    "check_bound",
    "greedy_isotropic",
    "random_bound_trials",
]


class ZeroBlockForm(ValueError):
    """A block was handed the zero form, which the bound does not allow."""


class DimensionMismatch(ValueError):
    """Vectors, forms, or spaces of incompatible dimensions were mixed."""


class NotIsotropic(ValueError):
    """The subspace fails isotropy, so the bound does not apply to it."""


def _determinant(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col]:
                factor = rows[r][col] / rows[col][col]
                for c in range(col, n):
                    rows[r][c] -= factor * rows[col][c]
    return det


def _rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    if not vectors:
        return 0
    rows = [list(v) for v in vectors]
    width = len(rows[0])
    rank = 0
    for col in range(width):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(rank + 1, len(rows)):
            if rows[r][col]:
                factor = rows[r][col] / rows[rank][col]
                for c in range(col, width):
                    rows[r][c] -= factor * rows[rank][c]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _sorted_with_sign(indices: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    order = list(indices)
    sign = 1
    for i in range(1, len(order)):
        j = i
        while j > 0 and order[j - 1] > order[j]:
            order[j - 1], order[j] = order[j], order[j - 1]
            sign = -sign
            j -= 1
    return tuple(order), sign


@dataclass(frozen=True)
class GradedSpace:
    """A rational vector space split into ordered blocks of positive dimension."""

    blocks: tuple[int, ...]

    def __post_init__(self) -> None:
        blocks = tuple(int(b) for b in self.blocks)
        if not blocks:
            raise ValueError("a graded space needs at least one block")
        if any(b < 1 for b in blocks):
            raise ValueError("every block must have positive dimension")
        object.__setattr__(self, "blocks", blocks)

    @property
    def dimension(self) -> int:
        return sum(self.blocks)

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @property
    def offsets(self) -> tuple[int, ...]:
        starts = []
        total = 0
        for b in self.blocks:
            starts.append(total)
            total += b
        return tuple(starts)


@dataclass(frozen=True)
class AlternatingForm:
    """An alternating multilinear form with exact rational coefficients.

    Coefficients are stored on strictly increasing index tuples; keys
    handed in any order are folded in with the sign of the sorting
    permutation, and keys with a repeated index vanish.

    >>> form = AlternatingForm(2, 2, {(1, 0): Fraction(3)})
    >>> form.coefficient((0, 1))
    Fraction(-3, 1)
    >>> form.evaluate(((0, 1), (1, 0)))
    Fraction(3, 1)
    """

    dimension: int
    arity: int
    coefficients: Mapping[tuple[int, ...], Rational]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ValueError("a form needs at least one argument slot")
        canonical: dict[tuple[int, ...], Fraction] = {}
        for key, raw in self.coefficients.items():
            indices = tuple(int(i) for i in key)
            if len(indices) != self.arity:
                raise ValueError("every key needs one index per argument slot")
            if any(i < 0 or i >= self.dimension for i in indices):
                raise ValueError("coefficient index out of range")
            if len(set(indices)) != len(indices):
                continue  # alternation kills repeated indices
            order, sign = _sorted_with_sign(indices)
            canonical[order] = canonical.get(order, Fraction(0)) + sign * Fraction(raw)
        cleaned = {key: value for key, value in sorted(canonical.items()) if value}
        object.__setattr__(self, "coefficients", cleaned)

    @classmethod
    def symplectic(cls, planes: int) -> "AlternatingForm":
        """The standard symplectic form on the given number of coordinate planes."""
        if planes < 1:
            raise ValueError("need at least one plane")
        return cls(2 * planes, 2, {(2 * i, 2 * i + 1): Fraction(1) for i in range(planes)})

    @classmethod
    def torus_cup_product(cls, n: int) -> "AlternatingForm":
        """Cup product and integration on degree-one torus cohomology.

        The n-fold cup product lands in the top degree, so the form is
        the coordinate volume form; for n = 2 it is the area pairing.
        """
        if n < 1:
            raise ValueError("the torus dimension must be positive")
        return cls(n, n, {tuple(range(n)): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, indices: Sequence[int]) -> Fraction:
        key = tuple(int(i) for i in indices)
        if len(set(key)) != len(key):
            return Fraction(0)
        order, sign = _sorted_with_sign(key)
        return sign * self.coefficients.get(order, Fraction(0))

    def evaluate(self, vectors: Sequence[Sequence[Rational]]) -> Fraction:
        """Value on a tuple of vectors, one per argument slot."""
        if len(vectors) != self.arity:
            raise DimensionMismatch(
                f"the form takes {self.arity} vectors, got {len(vectors)}"
            )
        rows = [[Fraction(c) for c in v] for v in vectors]
        if any(len(row) != self.dimension for row in rows):
            raise DimensionMismatch("vector length must match the form's dimension")
        total = Fraction(0)
        for key, coeff in self.coefficients.items():
            minor = [[row[i] for i in key] for row in rows]
            total += coeff * _determinant(minor)
        return total


@dataclass(frozen=True)
class Subspace:
    """A subspace of rational affine space, presented by an independent basis."""

    ambient: int
    vectors: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        vectors = tuple(tuple(Fraction(c) for c in v) for v in self.vectors)
        if any(len(v) != self.ambient for v in vectors):
            raise DimensionMismatch("basis vectors must have the ambient length")
        if _rank(vectors) != len(vectors):
            raise ValueError("basis vectors must be linearly independent")
        object.__setattr__(self, "vectors", vectors)

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, ())

    @property
    def dimension(self) -> int:
        return len(self.vectors)


def summed_pullback(
    space: GradedSpace, forms: Sequence[AlternatingForm]
) -> AlternatingForm:
    """Sum of the block forms pulled back along the block projections.

    Every block must carry exactly one nonzero form, all of one arity;
    in coordinates the pullback just shifts each index tuple by the
    block offset, so the blocks never interact.

    >>> space = GradedSpace((2, 2))
    >>> omega = summed_pullback(space, (AlternatingForm.symplectic(1),) * 2)
    >>> sorted(omega.coefficients)
    [(0, 1), (2, 3)]
    """
    if len(forms) != space.block_count:
        raise ValueError("need exactly one form per block")
    arities = {form.arity for form in forms}
    if len(arities) > 1:
        raise ValueError("the block forms must share one arity")
    coefficients: dict[tuple[int, ...], Fraction] = {}
    for j, (form, offset, block) in enumerate(
        zip(forms, space.offsets, space.blocks)
    ):
        if form.dimension != block:
            raise DimensionMismatch(
                f"the form on block {j} has dimension {form.dimension}, "
                f"the block has {block}"
            )
        if form.is_zero():
            raise ZeroBlockForm(f"the form on block {j} is zero")
        for key, value in form.coefficients.items():
            coefficients[tuple(i + offset for i in key)] = value
    return AlternatingForm(space.dimension, arities.pop(), coefficients)


def is_isotropic(subspace: Subspace, form: AlternatingForm) -> bool:
    """Whether the form vanishes identically on the subspace.

    By multilinearity and alternation it is enough to test the strictly
    increasing tuples of basis vectors; a subspace of dimension below
    the arity is isotropic for free.
    """
    if subspace.ambient != form.dimension:
        raise DimensionMismatch("the subspace and the form live in different spaces")
    for batch in itertools.combinations(subspace.vectors, form.arity):
        if form.evaluate(batch):
            return False
    return True


def check_bound(
    space: GradedSpace, forms: Sequence[AlternatingForm], subspace: Subspace
) -> tuple[bool, int]:
    """Codimension bound for an isotropic subspace: dim W <= dim V - blocks.

    Returns whether the bound holds and the slack left in it.  Isotropy
    is verified, not assumed; a non-isotropic subspace is an error, not
    a counterexample.

    >>> space = GradedSpace((2, 2))
    >>> forms = (AlternatingForm.symplectic(1),) * 2
    >>> lines = Subspace(4, ((1, 0, 0, 0), (0, 0, 1, 0)))
    >>> check_bound(space, forms, lines)
    (True, 0)
    """
    omega = summed_pullback(space, forms)
    if omega.arity < 2:
        raise ValueError("the dimension bound needs forms of arity at least two")
    if not is_isotropic(subspace, omega):
        raise NotIsotropic("the subspace is not isotropic for the summed form")
    slack = space.dimension - space.block_count - subspace.dimension
    return slack >= 0, slack


def greedy_isotropic(
    space: GradedSpace,
    forms: Sequence[AlternatingForm],
    seed: int,
    attempts: int = 40,
    start: Subspace | None = None,
) -> Subspace:
    """Grow a random isotropic subspace by greedy extension.

    Starting from the zero subspace (or the given isotropic one), draw
    small integer vectors and keep any that extend the basis while
    preserving isotropy; stop after a full round of failures.  The
    draw is reproducible from the seed, and every returned subspace is
    maximal for the search budget, not merely isotropic.
    """
    rng = random.Random(seed)
    omega = summed_pullback(space, forms)
    current = Subspace.zero(space.dimension) if start is None else start
    if not is_isotropic(current, omega):
        raise NotIsotropic("the starting subspace is not isotropic")
    while True:
        for _ in range(attempts):
            candidate = tuple(
                Fraction(rng.randint(-2, 2)) for _ in range(space.dimension)
            )
            if not any(candidate):
                continue
            vectors = current.vectors + (candidate,)
            if _rank(vectors) != len(vectors):
                continue
            # only tuples through the new vector need checking
            broken = any(
                omega.evaluate(batch + (candidate,))
                for batch in itertools.combinations(current.vectors, omega.arity - 1)
            )
            if not broken:
                current = Subspace(space.dimension, vectors)
                break
        else:
            return current


def random_bound_trials(
    count: int,
    seed: int,
    arities: Sequence[int] = (2, 3),
    max_blocks: int = 3,
    max_block_dim: int = 4,
) -> tuple[tuple[GradedSpace, tuple[AlternatingForm, ...], Subspace], ...]:
    """Reproducible random instances for stress-testing the bound.

    Each trial draws an arity, a block structure, one random nonzero
    form per block, and a greedy random isotropic subspace for the
    summed form.  Block dimensions never drop below the arity, where
    only the zero form would exist.
    """
    rng = random.Random(seed)
    trials = []
    for _ in range(count):
        q = rng.choice(tuple(arities))
        blocks = tuple(
            rng.randint(q, max_block_dim) for _ in range(rng.randint(1, max_blocks))
        )
        space = GradedSpace(blocks)
        forms = tuple(_random_form(b, q, rng) for b in blocks)
        subspace = greedy_isotropic(space, forms, rng.getrandbits(32), attempts=12)
        trials.append((space, forms, subspace))
    return tuple(trials)


def _random_form(dimension: int, arity: int, rng: random.Random) -> AlternatingForm:
    keys = tuple(itertools.combinations(range(dimension), arity))
    while True:
        coefficients = {
            key: Fraction(rng.randint(-2, 2)) for key in keys
        }
        form = AlternatingForm(dimension, arity, coefficients)
        if not form.is_zero():
            return form
