"""Boolean functions on the discrete cube and their Fourier-Walsh spectra.

Index conventions, used identically everywhere in this package:

* An input ``x`` is an integer mask.  Bit ``i`` of ``x`` (least significant
  bit is bit 0) holds the 0/1 preference of voter ``i + 1``.
* A subset ``S`` of voters is a mask with the same convention: bit ``i`` set
  means voter ``i + 1`` belongs to ``S``.
* Characters are signed, ``r_S(x) = prod_{i in S} (2 x_i - 1)``.  Spectra are
  produced and consumed in this signed convention only; in particular
  ``coeffs[0]`` is the plain mean of the function.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ValidationError

DEFAULT_N_MAX = 24

#: Largest supported arity.  A dense spectrum at the default ceiling is
#: ``2**24`` float64 coefficients (128 MiB); raise with care.
N_MAX = DEFAULT_N_MAX

#: Absolute tolerance for the sum-of-squares consistency check on spectra of
#: Boolean functions (``sum f_hat(S)^2 == f_hat(empty)``).
PARSEVAL_TOL = 1e-12

#: Largest arity for the dense character-matrix (quadratic) transform.
NAIVE_MAX = 12


def _check_arity(n: int) -> None:
    if not isinstance(n, (int, np.integer)):
        raise ValidationError(f"arity must be an integer, got {n!r}")
    if n < 1:
        raise ValidationError(f"arity must be >= 1, got {n}")
    if n > N_MAX:
        raise CapacityError(f"arity {n} exceeds N_MAX={N_MAX}")


@functools.lru_cache(maxsize=None)
def mask_levels(n: int) -> np.ndarray:
    """Popcount of every mask in ``[0, 2**n)`` as a read-only uint8 array."""
    levels = np.zeros(1, dtype=np.uint8)
    for _ in range(n):
        levels = np.concatenate([levels, levels + 1])
    levels.setflags(write=False)
    return levels


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class BooleanFunction:
    """A choice function ``f: {0,1}^n -> {0,1}`` stored as a truth table.

    ``table[x]`` is ``f(x)`` for the input mask ``x``.  Instances are
    immutable and safe to share between threads.
    """

    __slots__ = ("n", "table", "_packed")

    def __init__(self, n: int, table) -> None:
        _check_arity(n)
        raw = np.asarray(table)
        if raw.ndim != 1 or raw.size != 1 << n:
            raise ValidationError(
                f"table must have length 2**{n} = {1 << n}, got shape {raw.shape}"
            )
        arr = raw.astype(np.uint8, copy=True)
        if np.any(arr > 1) or (raw.dtype != np.uint8 and np.any(arr != raw)):
            raise ValidationError("table entries must be 0 or 1")
        self.n = n
        self.table = _frozen(arr)
        self._packed: int | None = None

    @classmethod
    def from_packed(cls, n: int, value: int) -> "BooleanFunction":
        """Build from the packed integer whose bit ``x`` is ``f(x)``."""
        _check_arity(n)
        size = 1 << n
        if not 0 <= value < (1 << size):
            raise ValidationError(f"packed value out of range for n={n}")
        raw = value.to_bytes((size + 7) // 8, "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        return cls(n, bits[:size])

    @classmethod
    def from_hex(cls, n: int, digits: str) -> "BooleanFunction":
        """Build from the lowercase hex encoding of the packed table."""
        return cls.from_packed(n, int(digits, 16))

    @property
    def packed(self) -> int:
        """The table packed into an integer, bit ``x`` = ``f(x)``."""
        if self._packed is None:
            raw = np.packbits(self.table, bitorder="little").tobytes()
            self._packed = int.from_bytes(raw, "little")
        return self._packed

    @property
    def hex(self) -> str:
        """Packed table as zero-padded lowercase hex (serialization form)."""
        width = ((1 << self.n) + 3) // 4
        return format(self.packed, f"0{width}x")

    def __call__(self, x: int) -> int:
        return evaluate(self, x)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BooleanFunction)
            and self.n == other.n
            and self.packed == other.packed
        )

    def __hash__(self) -> int:
        return hash((self.n, self.packed))

    def __repr__(self) -> str:
        return f"BooleanFunction(n={self.n}, hex='{self.hex}')"


@dataclass(frozen=True, eq=False)
class PseudoSpectrum:
    """A vector of signed-character coefficients with no Booleanity constraint.

    ``coeffs[mask]`` is the coefficient of ``r_S`` for the subset mask.
    """

    n: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        _check_arity(self.n)
        arr = np.asarray(self.coeffs, dtype=np.float64).copy()
        if arr.ndim != 1 or arr.size != 1 << self.n:
            raise ValidationError(
                f"coefficient vector must have length 2**{self.n}, got {arr.shape}"
            )
        object.__setattr__(self, "coeffs", _frozen(arr))

    @property
    def mean(self) -> float:
        """Coefficient of the empty set, the mean of the represented function."""
        return float(self.coeffs[0])


class WalshSpectrum(PseudoSpectrum):
    """Spectrum of a Boolean function.

    On top of the raw coefficient vector this enforces the consistency that
    holds exactly for 0/1-valued sources: the sum of squared coefficients
    equals the empty-set coefficient, which lies in ``[0, 1]``.
    """

    def __post_init__(self) -> None:
        super().__post_init__()
        total = float(np.sum(self.coeffs * self.coeffs))
        mean = self.mean
        if abs(total - mean) > PARSEVAL_TOL:
            raise ValidationError(
                "coefficients are not consistent with a Boolean source: "
                f"sum of squares {total!r} != mean {mean!r}"
            )
        if not -PARSEVAL_TOL <= mean <= 1.0 + PARSEVAL_TOL:
            raise ValidationError(f"mean coefficient {mean!r} outside [0, 1]")


def _analysis_butterfly(values: np.ndarray, n: int) -> None:
    # In place: entry S becomes sum_x v(x) r_S(x); bit i pairs at stride 2^i.
    for i in range(n):
        v = values.reshape(-1, 2, 1 << i)
        low = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        v[:, 1, :] -= low


def _synthesis_butterfly(values: np.ndarray, n: int) -> None:
    # Inverse of the analysis pass (up to the 2^-n scaling of the analysis).
    for i in range(n):
        v = values.reshape(-1, 2, 1 << i)
        low = v[:, 0, :].copy()
        v[:, 0, :] -= v[:, 1, :]
        v[:, 1, :] += low


def walsh_transform(f: BooleanFunction) -> WalshSpectrum:
    """Spectrum of ``f``: ``coeffs[S] = 2^-n sum_x f(x) r_S(x)``.

    Computed by the in-place butterfly in ``O(n 2^n)``; agrees with the
    quadratic summation of :func:`walsh_transform_naive`.
    """
    values = f.table.astype(np.float64)
    _analysis_butterfly(values, f.n)
    values /= float(1 << f.n)
    return WalshSpectrum(f.n, values)


def character_table(n: int) -> np.ndarray:
    """Dense matrix of signed characters, entry ``[S, x] = r_S(x)``."""
    if n > NAIVE_MAX:
        raise CapacityError(f"dense character table limited to n <= {NAIVE_MAX}")
    _check_arity(n)
    masks = np.arange(1 << n, dtype=np.int32)
    flipped = masks ^ ((1 << n) - 1)
    # r_S(x) = (-1)^{#(i in S with x_i = 0)}
    zeros_inside = mask_levels(n)[masks[:, None] & flipped[None, :]]
    return np.where(zeros_inside & 1, -1.0, 1.0)


def walsh_transform_naive(f: BooleanFunction) -> WalshSpectrum:
    """Quadratic-time transform straight from the definition.

    Independent of the butterfly path; used to cross-check it.
    """
    coeffs = character_table(f.n) @ f.table.astype(np.float64)
    return WalshSpectrum(f.n, coeffs / float(1 << f.n))


def inverse_walsh_transform(s: PseudoSpectrum) -> np.ndarray:
    """Pointwise values ``sum_S coeffs[S] r_S(x)`` over all inputs ``x``."""
    values = s.coeffs.astype(np.float64, copy=True)
    _synthesis_butterfly(values, s.n)
    return values


def evaluate(f: BooleanFunction, x: int) -> int:
    """``f(x)`` for the input mask ``x``."""
    if not 0 <= x < (1 << f.n):
        raise ValidationError(f"input mask {x} out of range for n={f.n}")
    return int(f.table[x])


def expectation(f: BooleanFunction) -> float:
    """``E[f]`` under the uniform measure, exact as a dyadic rational."""
    return int(f.table.sum()) / float(1 << f.n)


def level_weights(s: PseudoSpectrum) -> np.ndarray:
    """Entry ``k`` is the squared coefficient mass at level ``|S| = k``."""
    sq = s.coeffs * s.coeffs
    return np.bincount(mask_levels(s.n), weights=sq, minlength=s.n + 1)


def is_balanced(f: BooleanFunction) -> bool:
    """Exact integer test for ``E[f] = 1/2``."""
    return int(f.table.sum()) * 2 == (1 << f.n)


def is_monotone(f: BooleanFunction) -> bool:
    """True iff setting any single input bit never decreases ``f``."""
    return is_monotone_values(f.table, f.n)


def is_monotone_values(values, n: int, *, decreasing: bool = False, atol: float = 0.0) -> bool:
    """Coordinate-wise monotonicity test for a real-valued table.

    ``atol`` absorbs float round-off when the table came from arithmetic
    rather than a genuine truth table.
    """
    arr = np.asarray(values)
    if arr.size != 1 << n:
        raise ValidationError(f"table must have length 2**{n}")
    for i in range(n):
        v = arr.reshape(-1, 2, 1 << i)
        lower, upper = v[:, 0, :], v[:, 1, :]
        if decreasing:
            ok = np.all(upper <= lower + atol)
        else:
            ok = np.all(lower <= upper + atol)
        if not ok:
            return False
    return True


def is_constant(f: BooleanFunction) -> bool:
    return bool(f.table.all() or not f.table.any())


def dual(f: BooleanFunction) -> BooleanFunction:
    """The dual function ``x -> 1 - f(~x)``.

    Reversing the table visits ``~x`` because ``~x = 2^n - 1 - x``.
    """
    return BooleanFunction(f.n, 1 - f.table[::-1])


def is_self_dual(f: BooleanFunction) -> bool:
    return bool(np.array_equal(dual(f).table, f.table))


def _permuted_inputs(n: int, perm: tuple[int, ...]) -> np.ndarray:
    # Index array mapping x to the input whose bit perm[i] is bit i of x.
    x = np.arange(1 << n, dtype=np.int64)
    y = np.zeros_like(x)
    for i, j in enumerate(perm):
        y |= ((x >> i) & 1) << j
    return y


def is_invariant_under(f: BooleanFunction, generators) -> bool:
    """True iff ``f`` is unchanged by each given voter permutation.

    A generator is a tuple ``perm`` of length ``n`` sending voter index ``i``
    (0-based) to ``perm[i]``.  Invariance under a transitive group is only
    certified through explicit generators; this is a sufficient condition,
    not a decision procedure.
    """
    for perm in generators:
        if sorted(perm) != list(range(f.n)):
            raise ValidationError(f"not a voter permutation of 0..{f.n - 1}: {perm!r}")
        if not np.array_equal(f.table[_permuted_inputs(f.n, tuple(perm))], f.table):
            return False
    return True


def is_cyclic_invariant(f: BooleanFunction) -> bool:
    """True iff ``f`` is invariant under the cyclic rotation of voters."""
    rotation = tuple((i + 1) % f.n for i in range(f.n))
    return is_invariant_under(f, [rotation])


def random_function(n: int, rng: np.random.Generator) -> BooleanFunction:
    """Uniformly random truth table of arity ``n``."""
    _check_arity(n)
    return BooleanFunction(n, rng.integers(0, 2, size=1 << n, dtype=np.uint8))
