"""Named function families and preset choice-function triples."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bfn
from .bfn import BooleanFunction, mask_levels
from .errors import ValidationError
from .rationality import Gswf

FAMILY_NAMES = (
    "dictator",
    "majority",
    "and",
    "or",
    "threshold",
    "parity",
    "tribes",
    "constant",
)

PRESET_NAMES = (
    "condorcet",
    "dictator_triple",
    "split_dictators",
    "and_dual_majority",
    "threshold_instability",
    "alpha_half_extremal",
)


@dataclass(frozen=True)
class FamilySpec:
    """Parameters selecting one member of a named family."""

    family: str
    n: int
    voter: int | None = None        # dictator
    threshold: int | None = None    # threshold
    tribe_size: int | None = None   # tribes
    bit: int | None = None          # constant


def _weights(n: int) -> np.ndarray:
    # popcount of each input mask; identical to the level table
    return mask_levels(n)


def dictator(n: int, voter: int) -> BooleanFunction:
    if not 1 <= voter <= n:
        raise ValidationError(f"voter index must be in 1..{n}, got {voter}")
    x = np.arange(1 << n, dtype=np.int64)
    return BooleanFunction(n, ((x >> (voter - 1)) & 1).astype(np.uint8))


def threshold(n: int, k: int) -> BooleanFunction:
    """1 exactly on inputs with at least ``k`` ones; monotone by construction."""
    if not 0 <= k <= n + 1:
        raise ValidationError(f"threshold must be in 0..{n + 1}, got {k}")
    return BooleanFunction(n, (_weights(n) >= k).astype(np.uint8))


def majority(n: int) -> BooleanFunction:
    if n % 2 == 0:
        raise ValidationError(f"majority requires odd arity, got {n}")
    return threshold(n, (n + 1) // 2)


def conjunction(n: int) -> BooleanFunction:
    return threshold(n, n)


def disjunction(n: int) -> BooleanFunction:
    return threshold(n, 1)


def parity(n: int) -> BooleanFunction:
    return BooleanFunction(n, (_weights(n) & 1).astype(np.uint8))


def constant(n: int, bit: int) -> BooleanFunction:
    if bit not in (0, 1):
        raise ValidationError(f"constant bit must be 0 or 1, got {bit}")
    return BooleanFunction(n, np.full(1 << n, bit, dtype=np.uint8))


def tribes(n: int, tribe_size: int) -> BooleanFunction:
    """OR of ANDs over consecutive voter blocks.

    When ``tribe_size`` does not divide ``n`` the last tribe is simply
    shorter; cyclic invariance holds only in the divisible case.
    """
    if not 1 <= tribe_size <= n:
        raise ValidationError(f"tribe size must be in 1..{n}, got {tribe_size}")
    x = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.uint8)
    for start in range(0, n, tribe_size):
        width = min(tribe_size, n - start)
        block = ((1 << width) - 1) << start
        out |= ((x & block) == block).astype(np.uint8)
    return BooleanFunction(n, out)


def make(spec: FamilySpec) -> BooleanFunction:
    """Build the truth table described by a family spec."""
    fam, n = spec.family, spec.n
    if fam == "dictator":
        if spec.voter is None:
            raise ValidationError("dictator requires a voter index")
        return dictator(n, spec.voter)
    if fam == "majority":
        return majority(n)
    if fam == "and":
        return conjunction(n)
    if fam == "or":
        return disjunction(n)
    if fam == "threshold":
        if spec.threshold is None:
            raise ValidationError("threshold requires a cutoff")
        return threshold(n, spec.threshold)
    if fam == "parity":
        return parity(n)
    if fam == "tribes":
        if spec.tribe_size is None:
            raise ValidationError("tribes requires a tribe size")
        return tribes(n, spec.tribe_size)
    if fam == "constant":
        if spec.bit is None:
            raise ValidationError("constant requires a bit")
        return constant(n, spec.bit)
    raise ValidationError(f"unknown family {fam!r}; known: {', '.join(FAMILY_NAMES)}")


def instability_cutoff(n: int, q: float) -> int:
    """Smallest weight counted as a win for the instability threshold.

    Reads ``sum x_i >= (1-q) n`` as the ceiling of ``(1-q) n``; the small
    epsilon keeps decimal float noise from bumping an integer target up.
    """
    return math.ceil((1.0 - q) * n - 1e-9)


def preset_gswf(name: str, n: int, *, voter: int = 1, q: float | None = None) -> Gswf:
    """Build one of the named choice-function triples."""
    if name == "condorcet":
        m = majority(n)
        return Gswf(m, m, m)
    if name == "dictator_triple":
        d = dictator(n, voter)
        return Gswf(d, d, d)
    if name == "split_dictators":
        if n < 3:
            raise ValidationError("split_dictators needs at least three voters")
        return Gswf(dictator(n, 1), dictator(n, 2), dictator(n, 3))
    if name == "and_dual_majority":
        f = conjunction(n)
        return Gswf(f, bfn.dual(f), majority(n))
    if name == "threshold_instability":
        if q is None or not 0.0 < q < 0.5:
            raise ValidationError("threshold_instability requires 0 < q < 1/2")
        f = threshold(n, instability_cutoff(n, q))
        return Gswf(f, bfn.dual(f), majority(n))
    if name == "alpha_half_extremal":
        if n < 2:
            raise ValidationError("alpha_half_extremal needs at least two voters")
        d1 = dictator(n, 1)
        return Gswf(d1, d1, dictator(n, 2))
    raise ValidationError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")


def binary_entropy(q: float) -> float:
    """``H(q) = -q log2 q - (1-q) log2 (1-q)`` for ``0 < q < 1``."""
    if not 0.0 < q < 1.0:
        raise ValidationError(f"entropy argument must be in (0, 1), got {q!r}")
    return -q * math.log2(q) - (1.0 - q) * math.log2(1.0 - q)


def eta(n: int, q: float) -> float:
    """Expectation floor ``2^{n (H(q) - 1)} / (n + 1)`` for ``0 < q < 1/2``.

    This is ``2^{-eps n} / (n+1)`` with ``eps = 1 - H(q)``, the form the
    instability construction guarantees for its component expectations.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if not 0.0 < q < 0.5:
        raise ValidationError(f"q must lie strictly between 0 and 1/2, got {q!r}")
    return 2.0 ** (n * (binary_entropy(q) - 1.0)) / (n + 1)


def parse_function_spec(text: str) -> BooleanFunction:
    """Parse compact CLI function specs.

    Forms: ``maj:15``, ``thr:15:12``, ``dict:15:1``, ``and:3``, ``or:3``,
    ``parity:4``, ``tribes:9:3``, ``const:3:1`` and ``hex:3:e8`` (arity,
    then the packed truth table in hex).
    """
    parts = text.split(":")
    head = parts[0].lower()
    try:
        if head == "hex":
            if len(parts) != 3:
                raise ValidationError("hex spec is hex:<n>:<digits>")
            return BooleanFunction.from_hex(int(parts[1]), parts[2])
        n = int(parts[1])
        args = [int(p) for p in parts[2:]]
    except (IndexError, ValueError) as exc:
        raise ValidationError(f"malformed function spec {text!r}") from exc
    zero_arg = {
        "maj": majority,
        "majority": majority,
        "and": conjunction,
        "or": disjunction,
        "parity": parity,
    }
    one_arg = {
        "thr": threshold,
        "threshold": threshold,
        "dict": dictator,
        "dictator": dictator,
        "tribes": tribes,
        "const": constant,
        "constant": constant,
    }
    if head in zero_arg:
        if args:
            raise ValidationError(f"{head} spec takes no extra parameter: {text!r}")
        return zero_arg[head](n)
    if head in one_arg:
        if len(args) != 1:
            raise ValidationError(f"{head} spec needs exactly one parameter: {text!r}")
        return one_arg[head](n, args[0])
    raise ValidationError(f"unknown function spec {text!r}")
