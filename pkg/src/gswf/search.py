"""Exhaustive and randomized extremal search over Boolean function classes."""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import bfn
from .bfn import BooleanFunction, walsh_transform
from .dist import EvenProductDistribution
from .errors import CapacityError, ValidationError
from .rationality import Gswf, _delta_mask_weights, w_formula

#: Largest arity for full class enumeration (2^16 candidate tables at n=4).
ENUM_MAX = 4

#: Ceiling on |F| * |G| * |H| for the exhaustive triple scan.
TRIPLE_BUDGET = 10**9

#: Ceiling on any cached pairwise inner-product matrix, in bytes.
PAIR_CACHE_BYTES = 1 << 30

PREDICATES = {
    "balanced": bfn.is_balanced,
    "monotone": bfn.is_monotone,
    "self_dual": bfn.is_self_dual,
    "cyclic_invariant": bfn.is_cyclic_invariant,
    "non_constant": lambda f: not bfn.is_constant(f),
}


@dataclass(frozen=True)
class ClassFilter:
    """Conjunction of named structural predicates, plus an optional
    expectation window (inclusive)."""

    predicates: tuple[str, ...] = ()
    expectation_range: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        preds = tuple(self.predicates)
        object.__setattr__(self, "predicates", preds)
        for name in preds:
            if name not in PREDICATES:
                raise ValidationError(
                    f"unknown predicate {name!r}; known: {', '.join(sorted(PREDICATES))}"
                )
        if self.expectation_range is not None:
            lo, hi = self.expectation_range
            object.__setattr__(self, "expectation_range", (float(lo), float(hi)))
            if not lo <= hi:
                raise ValidationError(f"empty expectation range {self.expectation_range}")
        if not preds and self.expectation_range is None:
            raise ValidationError("a class filter needs at least one predicate")

    def accepts(self, f: BooleanFunction) -> bool:
        if self.expectation_range is not None:
            lo, hi = self.expectation_range
            if not lo <= bfn.expectation(f) <= hi:
                return False
        return all(PREDICATES[name](f) for name in self.predicates)

    @classmethod
    def parse(cls, text: str) -> "ClassFilter":
        """Parse CLI syntax like ``balanced,monotone,expectation:0.2:0.8``."""
        preds: list[str] = []
        window = None
        for token in text.split(","):
            token = token.strip()
            if not token:
                continue
            if token.startswith("expectation:"):
                try:
                    _, lo, hi = token.split(":")
                    window = (float(lo), float(hi))
                except ValueError as exc:
                    raise ValidationError(f"malformed expectation window {token!r}") from exc
            else:
                preds.append(token)
        return cls(tuple(preds), window)


@dataclass(frozen=True)
class ExtremalResult:
    """Optimum of ``W`` over a product of function classes."""

    objective: str
    value: float
    witness: tuple[BooleanFunction, BooleanFunction, BooleanFunction]
    distribution: EvenProductDistribution
    enumeration_count: int
    tie_break: str
    mode: str = "exhaustive"
    trials: int | None = None
    seed: int | None = None

    def witness_gswf(self) -> Gswf:
        return Gswf(*self.witness)

    def to_json_dict(self) -> dict:
        return {
            "objective": self.objective,
            "value": self.value,
            "n": self.witness[0].n,
            "witness": {
                "f": self.witness[0].hex,
                "g": self.witness[1].hex,
                "h": self.witness[2].hex,
            },
            "distribution": self.distribution.as_dict(),
            "enumeration_count": self.enumeration_count,
            "tie_break": self.tie_break,
            "mode": self.mode,
            "trials": self.trials,
            "seed": self.seed,
        }


_TIE_BREAK_NOTE = (
    "first optimum in ascending (f, g, h) truth-table order; exact value "
    "ties resolve to the lexicographically least triple"
)


@functools.lru_cache(maxsize=64)
def _class_members(n: int, filt: ClassFilter) -> tuple[BooleanFunction, ...]:
    if n > ENUM_MAX:
        raise CapacityError(
            f"full enumeration is limited to n <= {ENUM_MAX} "
            f"(2^(2^n) candidates); use random_search for larger arities"
        )
    out = []
    for packed in range(1 << (1 << n)):
        f = BooleanFunction.from_packed(n, packed)
        if filt.accepts(f):
            out.append(f)
    return tuple(out)


def enumerate_class(n: int, filt: ClassFilter):
    """All functions of arity ``n`` passing the filter, in ascending
    truth-table order."""
    yield from _class_members(n, filt)


def _spectra_matrix(members) -> np.ndarray:
    return np.stack([walsh_transform(f).coeffs for f in members])


def _pair_matrix(sa: np.ndarray, sb: np.ndarray, n: int, delta: float) -> np.ndarray:
    if sa.shape[0] * sb.shape[0] * 8 > PAIR_CACHE_BYTES:
        raise CapacityError("pairwise inner-product cache would exceed 1 GiB")
    return (sa * _delta_mask_weights(n, delta)) @ sb.T


def _is_pm_dictator(f: BooleanFunction) -> bool:
    table = f.table
    x = np.arange(1 << f.n, dtype=np.int64)
    for i in range(f.n):
        bit = ((x >> i) & 1).astype(np.uint8)
        if np.array_equal(table, bit) or np.array_equal(table, 1 - bit):
            return True
    return False


def extremal_w(
    n: int,
    filter_f: ClassFilter,
    filter_g: ClassFilter,
    filter_h: ClassFilter,
    d: EvenProductDistribution,
    objective: str,
    *,
    exclude_dictator_triples: bool = False,
) -> ExtremalResult:
    """Exact optimum of ``W`` over the filtered triple space.

    ``objective`` is ``min_w`` or ``max_w``.  Ties are broken toward the
    lexicographically least witness so parallel and serial scans agree.
    With ``exclude_dictator_triples`` the scan skips triples ``f = g = h``
    where the common function is a dictator or a negated dictator (the
    always-rational rules).
    """
    if objective not in ("min_w", "max_w"):
        raise ValidationError(f"objective must be min_w or max_w, got {objective!r}")
    F = _class_members(n, filter_f)
    G = _class_members(n, filter_g)
    H = _class_members(n, filter_h)
    count = len(F) * len(G) * len(H)
    if count == 0:
        raise ValidationError("one of the classes is empty")
    if count > TRIPLE_BUDGET:
        raise CapacityError(
            f"triple space of size {count} exceeds the {TRIPLE_BUDGET} budget; "
            "use random_search"
        )
    sf, sg, sh = _spectra_matrix(F), _spectra_matrix(G), _spectra_matrix(H)
    d1, d2, d3 = d.deltas
    bfg = _pair_matrix(sf, sg, n, d1)
    bgh = _pair_matrix(sg, sh, n, d2)
    bhf = _pair_matrix(sh, sf, n, d3)
    pf, pg, ph = sf[:, 0], sg[:, 0], sh[:, 0]
    ones = np.multiply.outer(pg, ph)
    zeros = np.multiply.outer(1 - pg, 1 - ph)
    maximize = objective == "max_w"
    skip_packed = None
    if exclude_dictator_triples:
        g_index = {f.packed: j for j, f in enumerate(G)}
        h_index = {f.packed: k for k, f in enumerate(H)}
        skip_packed = (g_index, h_index)
    best_value = None
    best_idx = None
    for i in range(len(F)):
        plane = pf[i] * ones + (1 - pf[i]) * zeros
        plane += bfg[i][:, None]
        plane += bgh
        plane += bhf[:, i][None, :]
        if skip_packed is not None and _is_pm_dictator(F[i]):
            j = skip_packed[0].get(F[i].packed)
            k = skip_packed[1].get(F[i].packed)
            if j is not None and k is not None:
                plane[j, k] = -np.inf if maximize else np.inf
        flat = int(np.argmax(plane) if maximize else np.argmin(plane))
        value = float(plane.flat[flat])
        better = best_value is None or (value > best_value if maximize else value < best_value)
        if better:
            best_value = value
            best_idx = (i, *np.unravel_index(flat, plane.shape))
    i, j, k = best_idx
    return ExtremalResult(
        objective=objective,
        value=best_value,
        witness=(F[i], G[j], H[k]),
        distribution=d,
        enumeration_count=count,
        tie_break=_TIE_BREAK_NOTE,
    )


def _sample_balanced(n: int, rng: np.random.Generator) -> BooleanFunction:
    table = np.zeros(1 << n, dtype=np.uint8)
    table[: 1 << (n - 1)] = 1
    rng.shuffle(table)
    return BooleanFunction(n, table)


def _sample_member(n: int, filt: ClassFilter, rng: np.random.Generator) -> BooleanFunction:
    if n <= ENUM_MAX:
        members = _class_members(n, filt)
        if not members:
            raise ValidationError("class filter matches no function")
        return members[int(rng.integers(0, len(members)))]
    balanced_only = set(filt.predicates) <= {"balanced", "non_constant"} and (
        "balanced" in filt.predicates
    )
    attempts = 0
    while attempts < 10_000:
        cand = _sample_balanced(n, rng) if balanced_only else bfn.random_function(n, rng)
        if filt.accepts(cand):
            return cand
        attempts += 1
    raise CapacityError(
        f"rejection sampling failed for filter {filt} at n={n}; "
        "no direct sampler is available for this class"
    )


def _random_search_enumerated(n, filters, d, objective, trials, rng):
    # Classes are enumerable: sample member indices in bulk and evaluate
    # the closed form on gathered spectrum rows.
    classes = [_class_members(n, filt) for filt in filters]
    for filt, members in zip(filters, classes):
        if not members:
            raise ValidationError(f"class filter {filt} matches no function")
    spectra = [_spectra_matrix(m) for m in classes]
    picks = [rng.integers(0, len(m), size=trials) for m in classes]
    rows = [s[idx] for s, idx in zip(spectra, picks)]
    d1, d2, d3 = d.deltas
    w1 = _delta_mask_weights(n, d1)
    w2 = _delta_mask_weights(n, d2)
    w3 = _delta_mask_weights(n, d3)
    p = [r[:, 0] for r in rows]
    values = (
        p[0] * p[1] * p[2]
        + (1 - p[0]) * (1 - p[1]) * (1 - p[2])
        + (rows[0] * w1 * rows[1]).sum(axis=1)
        + (rows[1] * w2 * rows[2]).sum(axis=1)
        + (rows[2] * w3 * rows[0]).sum(axis=1)
    )
    maximize = objective == "max_w"
    opt = float(values.max() if maximize else values.min())
    ties = np.flatnonzero(values == opt)
    packed = [np.array([f.packed for f in m], dtype=np.int64) for m in classes]
    keys = [(int(packed[0][picks[0][t]]), int(packed[1][picks[1][t]]), int(packed[2][picks[2][t]]), int(t)) for t in ties]
    key = min(keys)
    witness = tuple(classes[s][int(picks[s][key[3]])] for s in range(3))
    return opt, witness


def random_search(
    n: int,
    filters: tuple[ClassFilter, ClassFilter, ClassFilter],
    d: EvenProductDistribution,
    objective: str,
    trials: int,
    seed: int,
) -> ExtremalResult:
    """Best ``W`` over ``trials`` sampled triples, deterministic per seed."""
    if objective not in ("min_w", "max_w"):
        raise ValidationError(f"objective must be min_w or max_w, got {objective!r}")
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    if n <= ENUM_MAX:
        value, witness = _random_search_enumerated(n, filters, d, objective, trials, rng)
    else:
        maximize = objective == "max_w"
        best = None
        for _ in range(trials):
            f = _sample_member(n, filters[0], rng)
            g = _sample_member(n, filters[1], rng)
            h = _sample_member(n, filters[2], rng)
            w = w_formula(Gswf(f, g, h), d).w
            key = (f.packed, g.packed, h.packed)
            if best is None:
                best = (w, key, (f, g, h))
                continue
            improved = w > best[0] if maximize else w < best[0]
            if improved or (w == best[0] and key < best[1]):
                best = (w, key, (f, g, h))
        value, witness = best[0], best[2]
    return ExtremalResult(
        objective=objective,
        value=value,
        witness=witness,
        distribution=d,
        enumeration_count=trials,
        tie_break=_TIE_BREAK_NOTE,
        mode="random",
        trials=trials,
        seed=seed,
    )
