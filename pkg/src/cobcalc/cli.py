"""Command-line front end: parse brane expressions, run pipelines, emit JSON.

Expressions are integer combinations of the generator branes, written
like ``2*F(1/4,1/2){lx=g1} + Gamma(m=1,n=0,l=0,theta=1/3){eta=g2} -
Lx(theta=0)``; decorations in braces name monodromies in the configured
coefficient group (``e`` identity, ``g1`` the first generator, integer
combinations of both).  Torus lines use ``H(pos)`` and ``V(pos)`` with a
``g`` decoration.  Every subcommand prints a JSON object with a
``result`` field and an ``exact`` flag that is always true, because
every computation is exact; ``--output text`` renders the same data for
reading.  Parse errors exit with status 2 and carry the offending
position, semantic errors exit with status 1 and a machine-readable
code.
"""

from __future__ import annotations

import functools
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

import click

from cobcalc.abelian import (
    CircleValue,
    FGAbelianGroup,
    FormalSum,
    GroupElement,
    n_torsion,
)
from cobcalc.chow_k0 import (
    BlockMapNotQuasilinear,
    ChowClass,
    DivisorClass,
    EllipticModel,
    IntersectionTable,
    MissingTableEntry,
    PointClass,
    chern,
)
from cobcalc.cob_biell import (
    Brane,
    Fiber,
    InvariantTuple,
    LiftX,
    LiftY,
    NotInKernel,
    Section,
    is_cobordant,
    normal_form,
    surgery_decompose,
)
from cobcalc.cob_t2 import CircleBrane, NotNullHomologous, normal_form_t2
from cobcalc.homology import InternalInconsistency, compute_h2_twisted
from cobcalc.mirror import (
    NotInGeneratorSet,
    generator_grid,
    random_generator_sums,
    verify_isomorphism,
)
from cobcalc.roitman import (
    AlternatingForm,
    DimensionMismatch,
    GradedSpace,
    NotIsotropic,
    Subspace,
    ZeroBlockForm,
    check_bound,
    greedy_isotropic,
    random_bound_trials,
)
from cobcalc.tropical import SectionClass

__all__ = [
    "ParseError",
    "ConfigError",
    "Config",
    "BraneExpression",
    "load_config",
    "parse_brane_sum",
    "parse_line_sum",
    "format_brane_sum",
    "format_line_sum",
    "format_element",
    "main",
]


class ParseError(ValueError):
    """An expression was rejected; carries the character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


class ConfigError(ValueError):
    """The configuration file is missing, malformed, or inconsistent."""


# ------------------------------------------------------------------ scanning


@dataclass
class _Scanner:
    text: str
    pos: int = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def done(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, literal: str) -> bool:
        self.skip_ws()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str) -> None:
        if not self.take(literal):
            raise ParseError(f"expected '{literal}'", self.pos)

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and (
            self.text[self.pos].isalpha() or self.text[self.pos] == "_"
        ):
            self.pos += 1
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
        if start == self.pos:
            raise ParseError("expected a name", self.pos)
        return self.text[start : self.pos]

    def natural(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected a number", self.pos)
        return int(self.text[start : self.pos])

    def integer(self) -> int:
        self.skip_ws()
        sign = -1 if self.take("-") else 1
        return sign * self.natural()

    def rational(self) -> Fraction:
        numerator = self.integer()
        if self.take("/"):
            where = self.pos
            denominator = self.natural()
            if denominator == 0:
                raise ParseError("zero denominator", where)
            return Fraction(numerator, denominator)
        return Fraction(numerator)


# ------------------------------------------------------ element sub-language


def _parse_element(scanner: _Scanner, group: FGAbelianGroup) -> GroupElement:
    total = group.zero()
    sign = -1 if scanner.take("-") else 1
    while True:
        scanner.skip_ws()
        start = scanner.pos
        if scanner.peek().isdigit():
            weight = scanner.natural()
            scanner.expect("*")
        else:
            weight = 1
        name = scanner.ident()
        if name == "e":
            term = group.zero()
        elif name.startswith("g") and name[1:].isdigit():
            index = int(name[1:])
            if not 1 <= index <= group.ngens:
                raise ParseError(
                    f"the group has {group.ngens} generators, not '{name}'", start
                )
            term = group.generator(index - 1)
        else:
            raise ParseError(f"unknown element '{name}'", start)
        total = total + (sign * weight) * term
        if scanner.take("+"):
            sign = 1
        elif scanner.take("-"):
            sign = -1
        else:
            return total


def format_element(element: GroupElement) -> str:
    """Render a group element in the expression sub-language, `e` if zero."""
    parts = []
    for i, c in enumerate(element.coords):
        if not c:
            continue
        name = f"g{i + 1}"
        magnitude = name if abs(c) == 1 else f"{abs(c)}*{name}"
        if not parts:
            parts.append(magnitude if c > 0 else f"-{magnitude}")
        else:
            parts.append(f"+{magnitude}" if c > 0 else f"-{magnitude}")
    return "".join(parts) if parts else "e"


# ------------------------------------------------------------------- parsing


_INT_DECORATIONS = frozenset(("s", "w"))


def _parse_decorations(
    scanner: _Scanner,
    group: FGAbelianGroup,
    exact: Sequence[str],
    indexed: Sequence[str] = (),
) -> dict[str, Any]:
    values: dict[str, Any] = {}
    if not scanner.take("{"):
        return values
    while True:
        scanner.skip_ws()
        start = scanner.pos
        key = scanner.ident()
        base = key.rstrip("0123456789")
        if key in exact:
            kind = key
        elif base in indexed and key != base:
            kind = base
        else:
            raise ParseError(f"unknown decoration '{key}'", start)
        if key in values:
            raise ParseError(f"duplicate decoration '{key}'", start)
        scanner.expect("=")
        if kind in _INT_DECORATIONS:
            values[key] = scanner.integer()
        else:
            values[key] = _parse_element(scanner, group)
        if not scanner.take(","):
            break
    scanner.expect("}")
    return values


def _indexed(
    values: Mapping[str, Any], base: str, count: int, default: Any, position: int
) -> list[Any]:
    picked = [default] * count
    for key, value in values.items():
        if not key.startswith(base):
            continue
        suffix = key[len(base) :]
        if suffix == "":
            if count > 1:
                raise ParseError(
                    f"'{base}' is ambiguous with {count} circles; use {base}1..", position
                )
            picked[0] = value
        else:
            index = int(suffix)
            if not 1 <= index <= count:
                raise ParseError(f"'{key}' exceeds the {count} circles", position)
            picked[index - 1] = value
    return picked


def _parse_positions(scanner: _Scanner) -> list[Fraction]:
    scanner.expect("(")
    if scanner.peek().isalpha():
        start = scanner.pos
        key = scanner.ident()
        if key != "theta":
            raise ParseError(f"unknown argument '{key}'", start)
        scanner.expect("=")
        positions = [scanner.rational()]
    else:
        positions = [scanner.rational()]
        while scanner.take(","):
            positions.append(scanner.rational())
    scanner.expect(")")
    return positions


def _parse_brane(scanner: _Scanner, group: FGAbelianGroup) -> Brane:
    scanner.skip_ws()
    start = scanner.pos
    head = scanner.ident()
    zero = group.zero()
    if head == "F":
        scanner.expect("(")
        x = scanner.rational()
        scanner.expect(",")
        y = scanner.rational()
        scanner.expect(")")
        deco = _parse_decorations(scanner, group, ("lx", "ly"))
        return Fiber((x, y), deco.get("lx", zero), deco.get("ly", zero))
    if head == "Gamma":
        scanner.expect("(")
        named: dict[str, Any] = {}
        while True:
            where = scanner.pos
            key = scanner.ident()
            if key not in ("m", "n", "l", "theta") or key in named:
                raise ParseError(f"unexpected section argument '{key}'", where)
            scanner.expect("=")
            named[key] = scanner.rational() if key == "theta" else scanner.integer()
            if not scanner.take(","):
                break
        scanner.expect(")")
        if set(named) != {"m", "n", "l", "theta"}:
            raise ParseError("a section needs m, n, l and theta", start)
        deco = _parse_decorations(scanner, group, ("eta", "eta2", "s"))
        profile = SectionClass(
            named["m"], named["n"], named["l"], CircleValue(named["theta"])
        )
        return Section(
            profile,
            deco.get("eta", zero),
            deco.get("eta2", zero),
            deco.get("s", 1),
        )
    if head == "Lx":
        positions = _parse_positions(scanner)
        deco = _parse_decorations(scanner, group, ("nu", "eta2"), indexed=("nu",))
        monos = _indexed(deco, "nu", len(positions), zero, start)
        circles = tuple(
            (CircleValue(pos), nu) for pos, nu in zip(positions, monos)
        )
        return LiftX(circles, deco.get("eta2", zero))
    if head == "Ly":
        positions = _parse_positions(scanner)
        deco = _parse_decorations(scanner, group, ("nu", "w"), indexed=("nu", "w"))
        monos = _indexed(deco, "nu", len(positions), zero, start)
        weights = _indexed(deco, "w", len(positions), 1, start)
        circles = tuple(
            (CircleValue(pos), w, nu)
            for pos, w, nu in zip(positions, weights, monos)
        )
        return LiftY(circles)
    raise ParseError(f"unknown brane '{head}'", start)


def _parse_line(scanner: _Scanner, group: FGAbelianGroup) -> CircleBrane:
    scanner.skip_ws()
    start = scanner.pos
    head = scanner.ident()
    if head not in ("H", "V"):
        raise ParseError(f"unknown line '{head}'", start)
    scanner.expect("(")
    position = scanner.rational()
    scanner.expect(")")
    deco = _parse_decorations(scanner, group, ("g", "s"))
    direction = "horizontal" if head == "H" else "vertical"
    return CircleBrane(
        direction, CircleValue(position), deco.get("g", group.zero()), deco.get("s", 1)
    )


def _parse_sum(
    text: str, group: FGAbelianGroup, term: Callable[[_Scanner, FGAbelianGroup], Any]
) -> FormalSum:
    scanner = _Scanner(text)
    if scanner.done():
        raise ParseError("empty expression", scanner.pos)
    total = FormalSum.zero()
    sign = -1 if scanner.take("-") else 1
    while True:
        if scanner.peek().isdigit():
            coefficient = scanner.natural()
            scanner.expect("*")
        else:
            coefficient = 1
        brane = term(scanner, group)
        total = total + (sign * coefficient) * FormalSum.single(brane)
        if scanner.take("+"):
            sign = 1
        elif scanner.take("-"):
            sign = -1
        else:
            break
    if not scanner.done():
        raise ParseError("unexpected trailing input", scanner.pos)
    return total


def parse_brane_sum(text: str, group: FGAbelianGroup) -> FormalSum:
    """Parse an integer combination of Klein-base branes.

    >>> G = FGAbelianGroup(free_rank=1, torsion=(4,))
    >>> parsed = parse_brane_sum("2*F(1/4,1/2){lx=g1} - Lx(theta=0)", G)
    >>> sorted(parsed.items())[0][0]
    -1
    """
    return _parse_sum(text, group, _parse_brane)


def parse_line_sum(text: str, group: FGAbelianGroup) -> FormalSum:
    """Parse an integer combination of torus lines, `H(pos)` and `V(pos)`."""
    return _parse_sum(text, group, _parse_line)


# ------------------------------------------------------------ pretty-printing


def _format_decorations(pairs: Sequence[tuple[str, str]]) -> str:
    kept = [f"{key}={value}" for key, value in pairs if value is not None]
    return "{" + ",".join(kept) + "}" if kept else ""


def _format_brane(brane: Brane) -> str:
    if isinstance(brane, Fiber):
        deco = _format_decorations(
            (
                ("lx", None if brane.mono_x.is_zero() else format_element(brane.mono_x)),
                ("ly", None if brane.mono_y.is_zero() else format_element(brane.mono_y)),
            )
        )
        return f"F({brane.base[0]},{brane.base[1]}){deco}"
    if isinstance(brane, Section):
        _, include = n_torsion(brane.eta_z.parent, 2)
        wall = include(brane.eta_z2)
        deco = _format_decorations(
            (
                ("eta", None if brane.eta_z.is_zero() else format_element(brane.eta_z)),
                ("eta2", None if wall.is_zero() else format_element(wall)),
                ("s", None if brane.parity == 1 else "-1"),
            )
        )
        p = brane.profile
        return f"Gamma(m={p.m},n={p.n},l={p.l},theta={p.theta.value}){deco}"
    if isinstance(brane, LiftX):
        group = brane.circles[0][1].parent
        _, include = n_torsion(group, 2)
        wall = include(brane.eta_z2)
        single = len(brane.circles) == 1
        pairs = []
        for i, (_, nu) in enumerate(brane.circles):
            key = "nu" if single else f"nu{i + 1}"
            pairs.append((key, None if nu.is_zero() else format_element(nu)))
        pairs.append(("eta2", None if wall.is_zero() else format_element(wall)))
        positions = ",".join(str(pos.value) for pos, _ in brane.circles)
        return f"Lx({positions}){_format_decorations(pairs)}"
    if isinstance(brane, LiftY):
        single = len(brane.circles) == 1
        pairs = []
        for i, (_, w, nu) in enumerate(brane.circles):
            suffix = "" if single else str(i + 1)
            pairs.append((f"w{suffix}", None if w == 1 else str(w)))
            pairs.append((f"nu{suffix}", None if nu.is_zero() else format_element(nu)))
        positions = ",".join(str(pos.value) for pos, _, _ in brane.circles)
        return f"Ly({positions}){_format_decorations(pairs)}"
    raise TypeError(f"not a brane: {brane!r}")


def _format_line(brane: CircleBrane) -> str:
    head = "H" if brane.direction == "horizontal" else "V"
    deco = _format_decorations(
        (
            ("g", None if brane.monodromy.is_zero() else format_element(brane.monodromy)),
            ("s", None if brane.sign == 1 else "-1"),
        )
    )
    return f"{head}({brane.position.value}){deco}"


def _format_sum(sum_: FormalSum, piece: Callable[[Any], str]) -> str:
    parts = []
    for coefficient, brane in sum_.items():
        body = piece(brane)
        magnitude = body if abs(coefficient) == 1 else f"{abs(coefficient)}*{body}"
        if not parts:
            parts.append(magnitude if coefficient > 0 else f"-{magnitude}")
        else:
            parts.append(f" + {magnitude}" if coefficient > 0 else f" - {magnitude}")
    return "".join(parts) if parts else "0*F(0,1/2)"


def format_brane_sum(sum_: FormalSum) -> str:
    """Canonical expression for a brane sum; parsing it back is exact."""
    return _format_sum(sum_, _format_brane)


def format_line_sum(sum_: FormalSum) -> str:
    """Canonical expression for a torus line sum; parsing it back is exact."""
    return _format_sum(sum_, _format_line)


# ------------------------------------------------------------- configuration


@dataclass(frozen=True)
class Config:
    """Runtime configuration: coefficient group, intersection table, seed."""

    group: FGAbelianGroup
    table: IntersectionTable
    seed: int
    output: str = "json"


@dataclass(frozen=True)
class BraneExpression:
    """A textual brane expression, bound to a group only when evaluated."""

    text: str

    def into_sum(self, group: FGAbelianGroup) -> FormalSum:
        return parse_brane_sum(self.text, group)


def _decode_twist(raw: Any, group: FGAbelianGroup, what: str) -> GroupElement:
    if not isinstance(raw, list) or not all(isinstance(c, int) for c in raw):
        raise ConfigError(f"{what} twist must be a list of integer coordinates")
    try:
        return group.element(tuple(raw))
    except ValueError as err:
        raise ConfigError(f"{what}: {err}") from err


def _decode_elliptic(raw: Any, group: FGAbelianGroup, what: str) -> EllipticModel:
    if not isinstance(raw, dict):
        raise ConfigError(f"{what} must be an object with angle and twist")
    try:
        angle = CircleValue(Fraction(str(raw.get("angle", "0"))))
    except (ValueError, ZeroDivisionError) as err:
        raise ConfigError(f"{what} angle: {err}") from err
    twist = _decode_twist(raw.get("twist", [0] * group.ngens), group, what)
    return EllipticModel(angle, twist)


def _decode_point(raw: Any, group: FGAbelianGroup, what: str) -> PointClass:
    if isinstance(raw, int):
        return PointClass(raw, EllipticModel.zero(group))
    if not isinstance(raw, dict):
        raise ConfigError(f"{what} must be an integer or an object")
    degree = raw.get("degree", 0)
    if not isinstance(degree, int):
        raise ConfigError(f"{what} degree must be an integer")
    alb = raw.get("alb")
    model = (
        EllipticModel.zero(group)
        if alb is None
        else _decode_elliptic(alb, group, what)
    )
    return PointClass(degree, model)


def load_config(path: str | None, seed: int | None, output: str = "json") -> Config:
    """Build the runtime configuration from an optional JSON file.

    Without a file the group is Z + Z/4, the intersection table is bare,
    and the seed is zero; ``--seed`` overrides the file's value.
    """
    data: dict[str, Any] = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                data = json.load(handle)
        except OSError as err:
            raise ConfigError(f"cannot read config: {err}") from err
        except json.JSONDecodeError as err:
            raise ConfigError(f"config is not valid JSON: {err}") from err
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - {"group", "seed", "table"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    spec = data.get("group", {"free_rank": 1, "torsion": [4]})
    if not isinstance(spec, dict):
        raise ConfigError("group must be an object with free_rank and torsion")
    try:
        group = FGAbelianGroup(
            free_rank=int(spec.get("free_rank", 0)),
            torsion=tuple(int(d) for d in spec.get("torsion", [])),
        )
    except (TypeError, ValueError) as err:
        raise ConfigError(f"invalid group: {err}") from err

    chosen = seed if seed is not None else data.get("seed", 0)
    if not isinstance(chosen, int) or chosen < 0:
        raise ConfigError("seed must be a non-negative integer")

    table_spec = data.get("table", {})
    if not isinstance(table_spec, dict):
        raise ConfigError("table must be an object")
    unknown = set(table_spec) - {"half_point", "cross", "pic0_cross"}
    if unknown:
        raise ConfigError(f"unknown table keys: {sorted(unknown)}")
    kwargs: dict[str, Any] = {}
    if "half_point" in table_spec:
        kwargs["half_point"] = _decode_elliptic(
            table_spec["half_point"], group, "half_point"
        )
    cross: dict[tuple[str, str], Any] = {}
    for key, value in table_spec.get("cross", {}).items():
        slots = tuple(part.strip() for part in key.split(","))
        if len(slots) != 2:
            raise ConfigError(f"cross key '{key}' must name two slots")
        cross[slots] = (
            value if isinstance(value, int) else _decode_point(value, group, key)
        )
    pic0_cross = table_spec.get("pic0_cross", {})
    if not isinstance(pic0_cross, dict) or not all(
        isinstance(v, int) for v in pic0_cross.values()
    ):
        raise ConfigError("pic0_cross must map slot names to integers")
    try:
        table = IntersectionTable(group, cross=cross, pic0_cross=pic0_cross, **kwargs)
    except ValueError as err:
        raise ConfigError(f"invalid table: {err}") from err
    return Config(group, table, chosen, output)


# ------------------------------------------------------------- serialization


def _encode_group(group: FGAbelianGroup) -> dict[str, Any]:
    return {"free_rank": group.free_rank, "torsion": list(group.torsion)}


def _encode_element(element: GroupElement) -> list[int]:
    return list(element.coords)


def _encode_circle(value: CircleValue) -> str:
    return str(value.value)


def _encode_albanese(pair: tuple[CircleValue, GroupElement]) -> dict[str, Any]:
    return {"point": _encode_circle(pair[0]), "monodromy": _encode_element(pair[1])}


def _encode_invariant(t: InvariantTuple, group: FGAbelianGroup) -> dict[str, Any]:
    # The torsion slot lives in the 2-torsion subgroup; report it in
    # coordinates of the configured group like every other element.
    _, include = n_torsion(group, 2)
    c = t.cycle
    return {
        "cycle": [c.a, c.b, c.m, c.n, c.l],
        "torsion": _encode_element(include(t.torsion)),
        "albanese": _encode_albanese(t.albanese),
        "albanese_prime": _encode_albanese(t.albanese_prime),
    }


def _encode_elliptic(model: EllipticModel) -> dict[str, Any]:
    return {
        "angle": _encode_circle(model.angle),
        "twist": _encode_element(model.twist),
    }


def _encode_point_class(p: PointClass) -> dict[str, Any]:
    return {"degree": p.degree, "alb": _encode_elliptic(p.alb)}


def _encode_divisor(d: DivisorClass) -> dict[str, Any]:
    return {
        "fiber": d.fiber,
        "half_fiber": d.half_fiber,
        "tor_a": d.tor_a,
        "tor_b": d.tor_b,
        "pic0": _encode_elliptic(d.pic0),
    }


def _encode_chow(c: ChowClass) -> dict[str, Any]:
    return {
        "ch2": c.ch2,
        "ch1": _encode_divisor(c.ch1),
        "ch0": _encode_point_class(c.ch0),
    }


def _format_group_text(group: FGAbelianGroup) -> str:
    parts = ["Z"] * group.free_rank + [f"Z/{d}" for d in group.torsion]
    return " + ".join(parts) if parts else "0"


def _format_albanese_text(pair: tuple[CircleValue, GroupElement]) -> str:
    return f"({pair[0].value}, {format_element(pair[1])})"


# ------------------------------------------------------------------ emission


_SEMANTIC_CODES: tuple[tuple[type, str], ...] = (
    (ConfigError, "config"),
    (NotInKernel, "not-in-kernel"),
    (NotInGeneratorSet, "not-in-generator-set"),
    (MissingTableEntry, "missing-table-entry"),
    (BlockMapNotQuasilinear, "not-quasilinear"),
    (NotNullHomologous, "not-null-homologous"),
    (NotIsotropic, "not-isotropic"),
    (ZeroBlockForm, "zero-block-form"),
    (DimensionMismatch, "dimension-mismatch"),
    (InternalInconsistency, "internal-inconsistency"),
    (ValueError, "invalid-value"),
)


def _fail(status: int, code: str, message: str, position: int | None = None) -> None:
    body: dict[str, Any] = {"code": code, "message": message}
    if position is not None:
        body["position"] = position
    click.echo(json.dumps({"error": body}), err=True)
    sys.exit(status)


def _emit(config: Config, payload: Any, lines: Sequence[str]) -> None:
    if config.output == "json":
        click.echo(json.dumps({"result": payload, "exact": True}, indent=2))
    else:
        for line in lines:
            click.echo(line)


def _command(fn: Callable[..., tuple[Any, Sequence[str]]]) -> Callable[..., None]:
    @functools.wraps(fn)
    def wrapper(ctx: click.Context, /, *args: Any, **kwargs: Any) -> None:
        config: Config = ctx.obj
        try:
            payload, lines = fn(config, *args, **kwargs)
        except ParseError as err:
            _fail(2, "parse", str(err), err.position)
        except tuple(kind for kind, _ in _SEMANTIC_CODES) as err:
            code = next(c for kind, c in _SEMANTIC_CODES if isinstance(err, kind))
            _fail(1, code, str(err))
        else:
            _emit(config, payload, lines)

    return click.pass_context(wrapper)


# ------------------------------------------------------------------ commands


@click.group()
@click.option("--config", "config_path", type=str, default=None, help="JSON config file.")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option(
    "--output",
    type=click.Choice(("json", "text")),
    default="json",
    help="Result rendering.",
)
@click.pass_context
def main(ctx: click.Context, config_path: str | None, seed: int | None, output: str) -> None:
    """Exact calculators for brane cobordism classes and their mirrors."""
    try:
        ctx.obj = load_config(config_path, seed, output)
    except ConfigError as err:
        _fail(1, "config", str(err))


@main.command("normal-form")
@click.argument("expression")
@_command
def normal_form_command(config: Config, expression: str) -> tuple[Any, Sequence[str]]:
    """Complete invariant of a brane expression."""
    sum_ = parse_brane_sum(expression, config.group)
    t = normal_form(sum_, config.group)
    _, include = n_torsion(config.group, 2)
    lines = [
        f"cycle = ({t.cycle.a}, {t.cycle.b}, {t.cycle.m}, {t.cycle.n}, {t.cycle.l})",
        f"torsion = {format_element(include(t.torsion))}",
        f"albanese = {_format_albanese_text(t.albanese)}",
        f"albanese' = {_format_albanese_text(t.albanese_prime)}",
    ]
    return _encode_invariant(t, config.group), lines


@main.command("cobordant")
@click.argument("left")
@click.argument("right")
@_command
def cobordant_command(config: Config, left: str, right: str) -> tuple[Any, Sequence[str]]:
    """Whether two brane expressions are cobordant."""
    a = parse_brane_sum(left, config.group)
    b = parse_brane_sum(right, config.group)
    answer = is_cobordant(a, b, config.group)
    return answer, [f"cobordant: {'yes' if answer else 'no'}"]


@main.command("homology")
@_command
def homology_command(config: Config) -> tuple[Any, Sequence[str]]:
    """Twisted middle homology with its named generators."""
    h2 = compute_h2_twisted()
    payload = {
        "group": _encode_group(h2.group),
        "generators": list(h2.generators),
        "chart_quotient": _encode_group(h2.chart_quotient),
        "overlap_kernel": _encode_group(h2.overlap_kernel),
    }
    lines = [
        f"H2 = {_format_group_text(h2.group)}",
        f"generators: {', '.join(h2.generators)}",
        f"chart quotient = {_format_group_text(h2.chart_quotient)}",
        f"overlap kernel = {_format_group_text(h2.overlap_kernel)}",
    ]
    return payload, lines


@main.group("t2")
def t2_group() -> None:
    """Torus-line calculators."""


@t2_group.command("normal-form")
@click.argument("expression")
@_command
def t2_normal_form_command(config: Config, expression: str) -> tuple[Any, Sequence[str]]:
    """Complete invariant of a torus line expression."""
    sum_ = parse_line_sum(expression, config.group)
    t = normal_form_t2(sum_, config.group)
    payload = {
        "homology": list(t.homology),
        "flux": _encode_circle(t.flux),
        "monodromy": _encode_element(t.monodromy),
    }
    lines = [
        f"homology = ({t.homology[0]}, {t.homology[1]})",
        f"flux = {t.flux.value}",
        f"monodromy = {format_element(t.monodromy)}",
    ]
    return payload, lines


@main.group("chow")
def chow_group() -> None:
    """Sheaf-side calculators."""


@chow_group.command("chern")
@click.argument("rank", type=int)
@click.argument("c1")
@click.argument("c2")
@_command
def chern_command(config: Config, rank: int, c1: str, c2: str) -> tuple[Any, Sequence[str]]:
    """Integral Chern character from rank and JSON-encoded c1, c2."""
    divisor = _decode_chern_divisor(c1, config.group)
    point = _decode_chern_point(c2, config.group)
    c = chern(rank, divisor, point, config.table)
    lines = [
        f"ch2 = {c.ch2}",
        "ch1 = fiber {}, half_fiber {}, tor_a {}, tor_b {}, pic0 ({}, {})".format(
            c.ch1.fiber,
            c.ch1.half_fiber,
            c.ch1.tor_a,
            c.ch1.tor_b,
            c.ch1.pic0.angle.value,
            format_element(c.ch1.pic0.twist),
        ),
        "ch0 = degree {}, albanese ({}, {})".format(
            c.ch0.degree, c.ch0.alb.angle.value, format_element(c.ch0.alb.twist)
        ),
    ]
    return _encode_chow(c), lines


def _decode_chern_divisor(raw: str, group: FGAbelianGroup) -> DivisorClass:
    data = _load_json_argument(raw, "c1")
    if not isinstance(data, dict):
        raise ValueError("c1 must be a JSON object")
    unknown = set(data) - {"fiber", "half_fiber", "tor_a", "tor_b", "pic0"}
    if unknown:
        raise ValueError(f"unknown c1 keys: {sorted(unknown)}")
    counts = {}
    for key in ("fiber", "half_fiber", "tor_a", "tor_b"):
        value = data.get(key, 0)
        if not isinstance(value, int):
            raise ValueError(f"c1 {key} must be an integer")
        counts[key] = value
    pic0 = data.get("pic0")
    model = (
        EllipticModel.zero(group)
        if pic0 is None
        else _decode_elliptic(pic0, group, "pic0")
    )
    return DivisorClass(
        counts["fiber"], counts["half_fiber"], counts["tor_a"], counts["tor_b"], model
    )


def _decode_chern_point(raw: str, group: FGAbelianGroup) -> PointClass:
    data = _load_json_argument(raw, "c2")
    return _decode_point(data, group, "c2")


def _load_json_argument(raw: str, name: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError as err:
        raise ParseError(f"{name} is not valid JSON: {err.msg}", err.pos) from err


@main.group("mirror")
def mirror_group() -> None:
    """Mirror-dictionary calculators."""


@mirror_group.command("verify")
@_command
def mirror_verify_command(config: Config) -> tuple[Any, Sequence[str]]:
    """Dual-route check of the generator dictionary on grid plus random sums."""
    grid = generator_grid(config.group) + random_generator_sums(
        config.group, 50, config.seed
    )
    report = verify_isomorphism(grid, config.table)
    payload = {
        "group": _encode_group(config.group),
        "checked": report.checked,
        "mismatches": len(report.mismatches),
        "ok": report.ok,
    }
    lines = [
        f"checked {report.checked} sums",
        f"mismatches {len(report.mismatches)}",
        f"ok: {'yes' if report.ok else 'no'}",
    ]
    return payload, lines


@main.group("relations")
def relations_group() -> None:
    """Relation suites."""


@relations_group.command("check")
@_command
def relations_check_command(config: Config) -> tuple[Any, Sequence[str]]:
    """Re-derive the defining relations and report each as vanishing."""
    report = _relation_report(config.group)
    payload = [{"relation": name, "status": status} for name, status in report]
    lines = [f"{name}: {status}" for name, status in report]
    return payload, lines


def _relation_report(group: FGAbelianGroup) -> list[tuple[str, str]]:
    zero = group.zero()
    grid = (Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2))

    def hor(a: Fraction) -> CircleBrane:
        return CircleBrane("horizontal", CircleValue(a), zero)

    def ver(a: Fraction) -> CircleBrane:
        return CircleBrane("vertical", CircleValue(a), zero)

    exchange = all(
        normal_form_t2(
            FormalSum.of(
                (1, hor(a)), (-1, hor(a + t)), (-1, ver(b)), (1, ver(b + t))
            ),
            group,
        ).is_zero()
        for a in grid
        for b in grid
        for t in grid
    )
    sliding = all(
        normal_form_t2(
            FormalSum.of(
                (1, hor(Fraction(0))), (-1, hor(t)), (-1, hor(a)), (1, hor(a + t))
            ),
            group,
        ).is_zero()
        for a in grid
        for t in grid
    )

    systems = (zero,) + group.generators()
    surgery = all(
        is_cobordant(
            FormalSum.single(section), surgery_decompose(section), group
        )
        for m in (-2, 0, 1)
        for n in (-2, 0, 1)
        for l in (0, 1)
        for theta in grid
        for eta in systems
        for section in (
            Section(
                SectionClass(m, n, l, CircleValue(theta)),
                eta,
                zero,
            ),
        )
    )

    probe = group.generator(0) if group.ngens else zero
    first = FormalSum.of(
        (1, Fiber((Fraction(1, 8), Fraction(1, 3)), probe, probe)),
        (-1, Fiber((Fraction(1, 8), Fraction(-1, 3)), probe, -probe)),
    )
    second = FormalSum.of(
        (1, Fiber((Fraction(1, 8), Fraction(1, 3)), probe, probe)),
        (-1, Fiber((Fraction(1, 8), Fraction(1, 2)), probe, zero)),
    )

    def status(vanishes: bool) -> str:
        return "vanishes" if vanishes else "FAILS"

    return [
        ("torus-direction-exchange", status(exchange)),
        ("torus-sliding", status(sliding)),
        ("section-surgery-grid", status(surgery)),
        ("doubled-first-fiber-torsion", status(normal_form(2 * first, group).is_zero())),
        ("quadrupled-second-fiber-torsion", status(normal_form(4 * second, group).is_zero())),
        ("second-fiber-torsion", status(normal_form(second, group).is_zero())),
    ]


@main.group("roitman")
def roitman_group() -> None:
    """Isotropic-bound calculators."""


@roitman_group.command("check")
@click.option("--trials", type=int, default=1000, help="Number of random instances.")
@_command
def roitman_check_command(config: Config, trials: int) -> tuple[Any, Sequence[str]]:
    """Random stress test of the codimension bound plus tightness witnesses."""
    outcomes = [
        check_bound(space, forms, subspace)
        for space, forms, subspace in random_bound_trials(trials, config.seed)
    ]
    all_hold = all(holds for holds, _ in outcomes)
    min_slack = min((slack for _, slack in outcomes), default=0)

    tightness = []
    for planes in (1, 2, 3, 4):
        space = GradedSpace((2,) * planes)
        forms = (AlternatingForm.symplectic(1),) * planes
        axes = Subspace(
            space.dimension,
            tuple(
                tuple(1 if i == offset else 0 for i in range(space.dimension))
                for offset in space.offsets
            ),
        )
        grown = greedy_isotropic(
            space, forms, config.seed + planes, attempts=30, start=axes
        )
        tightness.append(
            {
                "blocks": planes,
                "dimension": space.dimension,
                "bound": space.dimension - planes,
                "found": grown.dimension,
            }
        )
    tight = all(row["found"] == row["bound"] for row in tightness)
    payload = {
        "trials": trials,
        "all_hold": all_hold,
        "min_slack": min_slack,
        "tightness": tightness,
        "tight": tight,
    }
    lines = [
        f"trials {trials}",
        f"all hold: {'yes' if all_hold else 'no'}",
        f"min slack {min_slack}",
        "tightness: "
        + ", ".join(f"{row['blocks']} blocks -> {row['found']}/{row['bound']}" for row in tightness),
    ]
    return payload, lines


if __name__ == "__main__":
    main()
