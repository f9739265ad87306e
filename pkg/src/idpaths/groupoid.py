"""Groupoid laws with explicit witnesses between paths, path levels and globular towers."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from . import kernel, paths
from .errors import LawFailed, MalformedTower
from .kernel import Base, Derivation, EmbeddedPath, IdT, PathJudg, PathWitness, TermVar, Typing
from .paths import Atom, Endpoint, Path, Rho, Sigma, Tau, endpoint_eq
from .rewriting import RuleId, Trace, normalize_path
from .terms import Var

CARRIER = Base("A")
POINTS = tuple(Var(v) for v in "xyzw")
DUPLICATE_LIMIT = 8


def schema_atoms() -> dict[str, Atom]:
    """Three composable atoms ``p: x -> y``, ``q: y -> z``, ``r: z -> w``."""
    x, y, z, w = POINTS
    return {"p": Atom("p", x, y), "q": Atom("q", y, z), "r": Atom("r", z, w)}


def single_atom() -> dict[str, Atom]:
    x, y = POINTS[:2]
    return {"r": Atom("r", x, y)}


@dataclass(frozen=True)
class GroupoidLaw:
    name: str
    lhs: Callable[[dict[str, Path]], Path]
    rhs: Callable[[dict[str, Path]], Path]
    witness_rule: RuleId
    default_atoms: Callable[[], dict[str, Atom]] = single_atom

    def instantiate(self, atoms: dict[str, Path] | None = None) -> tuple[Path, Path]:
        atoms = self.default_atoms() if atoms is None else atoms
        return self.lhs(atoms), self.rhs(atoms)


LAWS: tuple[GroupoidLaw, ...] = (
    GroupoidLaw(
        "assoc",
        lambda a: Tau(Tau(a["p"], a["q"]), a["r"]),
        lambda a: Tau(a["p"], Tau(a["q"], a["r"])),
        RuleId.TT,
        schema_atoms,
    ),
    GroupoidLaw("left_unit", lambda a: Tau(Rho(a["r"].source), a["r"]), lambda a: a["r"], RuleId.TLR),
    GroupoidLaw("right_unit", lambda a: Tau(a["r"], Rho(a["r"].target)), lambda a: a["r"], RuleId.TRR),
    GroupoidLaw("left_inverse", lambda a: Tau(Sigma(a["r"]), a["r"]), lambda a: Rho(a["r"].target), RuleId.TSR),
    GroupoidLaw("right_inverse", lambda a: Tau(a["r"], Sigma(a["r"])), lambda a: Rho(a["r"].source), RuleId.TR),
    GroupoidLaw("double_sym", lambda a: Sigma(Sigma(a["r"])), lambda a: a["r"], RuleId.SS),
)


def law(name: str) -> GroupoidLaw:
    for candidate in LAWS:
        if candidate.name == name:
            return candidate
    raise KeyError(name)


@dataclass(frozen=True)
class Witness:
    law: str
    lhs: Path
    rhs: Path
    normal_form: Path
    lhs_trace: Trace
    rhs_trace: Trace
    path: Path
    inhabitant: PathWitness
    id_type: IdT
    derivation: Derivation

    @property
    def rules(self) -> list[str]:
        return self.lhs_trace.rules() + self.rhs_trace.rules()

    def rendered(self) -> str:
        return f"{kernel.pretty(self.inhabitant)} : {kernel.pretty_type(self.id_type)}"

    def to_record(self) -> dict:
        return {
            "law": self.law,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "normal_form": str(self.normal_form),
            "rules": self.rules,
            "witness": str(self.path),
            "inhabitant": self.rendered(),
        }


def _end_term(e: Endpoint):
    return kernel.endpoint_term(e)


def verify_law(law: GroupoidLaw, atoms: dict[str, Path] | None = None) -> Witness:
    """Normalize both sides, demand the same normal form and assemble the witness one level up."""
    lhs, rhs = law.instantiate(atoms)
    nf_l, trace_l = normalize_path(lhs)
    nf_r, trace_r = normalize_path(rhs)
    if nf_l != nf_r:
        raise LawFailed(f"{law.name}: {nf_l} and {nf_r} differ")
    forward = trace_l.as_path()
    back = Rho(nf_r) if not trace_r.steps else Sigma(trace_r.as_path())
    witness = Tau(forward, back)

    # the single-step inhabitant exhibited for each law, checked through IdI1
    inhabitant_path = forward if trace_l.steps and not trace_r.steps else witness
    base = IdT(CARRIER, _end_term(lhs.source), _end_term(lhs.target))
    left, right = EmbeddedPath(lhs), EmbeddedPath(rhs)
    inhabitant = PathWitness(inhabitant_path, left, right)
    id_type = IdT(base, left, right)
    premise = Derivation("Rw", PathJudg(left, inhabitant_path, right, base))
    derivation = Derivation("IdI1", Typing(inhabitant, id_type), (premise,))
    kernel.check(derivation, context=_point_context(lhs))
    return Witness(law.name, lhs, rhs, nf_l, trace_l, trace_r, witness, inhabitant, id_type, derivation)


def _point_context(p: Path) -> dict:
    return {name: CARRIER for name in paths.term_free_vars(p)}


def verify_all() -> list[Witness]:
    return [verify_law(candidate) for candidate in LAWS]


# ---------------------------------------------------------------- levels


def level(e: Endpoint) -> int:
    """0 for a path between terms, one more than its endpoints otherwise."""
    return paths.level(e)


# ---------------------------------------------------------------- globular towers


@dataclass(frozen=True)
class GlobularInstance:
    """Layer 0 holds two terms; each later layer holds paths between the first and last objects below it."""

    tower: tuple[tuple[Endpoint, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.tower) - 1


def _src(e: Endpoint, where: str) -> Endpoint:
    if paths.is_term(e):
        raise MalformedTower(f"{where}: a term has no source")
    return e.source


def _tgt(e: Endpoint, where: str) -> Endpoint:
    if paths.is_term(e):
        raise MalformedTower(f"{where}: a term has no target")
    return e.target


def validate_tower(instance: GlobularInstance) -> None:
    tower = instance.tower
    if len(tower) < 2:
        raise MalformedTower("a tower needs terms and at least one layer of paths")
    if not tower[0] or not all(paths.is_term(t) for t in tower[0]):
        raise MalformedTower("layer 0 must hold terms")
    for k in range(1, len(tower)):
        below = tower[k - 1]
        if not tower[k]:
            raise MalformedTower(f"layer {k} is empty")
        for i, obj in enumerate(tower[k]):
            where = f"layer {k}, object {i}"
            if paths.is_term(obj):
                raise MalformedTower(f"{where} is a term, expected a path")
            if obj.level != k - 1:
                raise MalformedTower(f"{where} has level {obj.level}, expected {k - 1}")
            if not endpoint_eq(obj.source, below[0]) or not endpoint_eq(obj.target, below[-1]):
                raise MalformedTower(f"{where} does not run between the objects of layer {k - 1}")


def globular_check(instance: GlobularInstance) -> bool:
    """The identities s(s(x)) = s(t(x)) and t(s(x)) = t(t(x)) at every layer from 2 up."""
    if instance.depth < 2:
        raise MalformedTower(f"globular identities need depth at least 2, got {instance.depth}")
    validate_tower(instance)
    for k in range(2, len(instance.tower)):
        for i, x in enumerate(instance.tower[k]):
            where = f"layer {k}, object {i}"
            s, t = _src(x, where), _tgt(x, where)
            if not endpoint_eq(_src(s, where), _src(t, where)):
                return False
            if not endpoint_eq(_tgt(s, where), _tgt(t, where)):
                return False
    return True


@dataclass(frozen=True)
class TowerConfig:
    count: int = 1000
    min_depth: int = 2
    max_depth: int = 4
    max_size: int = 6
    seed: int = 0

    def __post_init__(self):
        if not 2 <= self.min_depth <= self.max_depth:
            raise ValueError("need 2 <= min_depth <= max_depth")
        if self.max_size < 1:
            raise ValueError("max_size must be positive")


def random_path(rng: random.Random, src: Endpoint, tgt: Endpoint, size: int, base: Path) -> Path:
    """A random rho/sigma/tau expression from ``src`` to ``tgt`` over ``base: src -> tgt``."""
    if size <= 1 or rng.random() < 0.2:
        return base if not endpoint_eq(src, tgt) or rng.random() < 0.5 else Rho(src)
    # duplicating a large connector makes later layers explode, so only small ones are copied
    choice = rng.randrange(5 if base.size <= DUPLICATE_LIMIT else 3)
    if choice == 0:
        return Sigma(Sigma(random_path(rng, src, tgt, size - 2, base)))
    if choice == 1:
        return Tau(Rho(src), random_path(rng, src, tgt, size - 2, base))
    if choice == 2:
        return Tau(random_path(rng, src, tgt, size - 2, base), Rho(tgt))
    if choice == 3:
        inner = random_path(rng, src, tgt, (size - 2) // 2, base)
        return Tau(Tau(inner, Sigma(inner)), random_path(rng, src, tgt, (size - 2) // 2, base))
    left = random_path(rng, src, tgt, (size - 2) // 2, base)
    return Tau(left, Tau(Sigma(left), random_path(rng, src, tgt, (size - 2) // 2, base)))


def random_tower(rng: random.Random, depth: int, max_size: int = 6) -> GlobularInstance:
    """A tower whose layer k+1 is (w, normal form of w) for a random redundant path w over the trace below.

    The seven rules are applied at every level only to manufacture parallel
    paths; nothing is claimed about rewriting beyond level 0.
    """
    a, b = Var("a"), Var("b")
    layers: list[tuple[Endpoint, ...]] = [(a, b)]
    connector: Path = Atom("p", a, b)
    for _ in range(depth):
        below = layers[-1]
        w = random_path(rng, below[0], below[-1], rng.randint(1, max_size), connector)
        nf, trace = normalize_path(w)
        layers.append((w,) if nf == w else (w, nf))
        connector = _right_chain(trace)
    return GlobularInstance(tuple(layers))


def _right_chain(trace: Trace) -> Path:
    """The trace composed to the right; a left chain would be reassociated at every level above."""
    if not trace.steps:
        return Rho(trace.initial)
    parts = [step.as_path() for step in trace.steps]
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = Tau(part, result)
    return result


def random_towers(config: TowerConfig) -> list[GlobularInstance]:
    rng = random.Random(config.seed)
    return [
        random_tower(rng, rng.randint(config.min_depth, config.max_depth), config.max_size)
        for _ in range(config.count)
    ]
