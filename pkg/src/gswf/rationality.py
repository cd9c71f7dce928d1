"""Irrational-outcome probability for three-alternative choice rules.

A rule is a triple ``(f, g, h)`` of equal-arity Boolean functions deciding
the pairs (A,B), (B,C) and (C,A).  A profile produces an irrational
(cyclic) outcome exactly when the three pairwise decisions coincide, and
``W(f, g, h)`` is the probability of that event.

Two independent evaluation paths are provided:

* ``w_formula`` evaluates the closed form
  ``W = p1 p2 p3 + (1-p1)(1-p2)(1-p3)
  + <<f,g>>_{4a-1} + <<g,h>>_{4b-1} + <<h,f>>_{4c-1}``,
  valid for even product distributions, where ``<<.,.>>_d`` is the biased
  inner product of spectra and ``p_i`` are the means.
* ``w_oracle`` enumerates all ``6^n`` admissible profiles and accumulates
  probability mass directly; it shares no code with the formula path and
  accepts arbitrary per-voter triple distributions.

A seeded Monte Carlo estimator covers arities beyond the oracle ceiling.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import bfn
from .bfn import BooleanFunction, PseudoSpectrum, mask_levels, walsh_transform
from .dist import ADMISSIBLE_TRIPLES, EvenProductDistribution, as_triple_distribution
from .errors import CapacityError, ValidationError

#: Largest arity accepted by the exhaustive profile oracle (6^9 ~ 1e7).
ORACLE_MAX = 9

#: Oracle profile tables are cached up to this arity (6^6 profiles).
_PROFILE_CACHE_MAX = 6

_ORACLE_BATCH = 1 << 20

_TRIPLE_BITS = np.array(ADMISSIBLE_TRIPLES, dtype=np.uint8)


@dataclass(frozen=True, eq=False)
class Gswf:
    """Choice functions for the pairs (A,B), (B,C), (C,A)."""

    f: BooleanFunction
    g: BooleanFunction
    h: BooleanFunction

    def __post_init__(self) -> None:
        if not (self.f.n == self.g.n == self.h.n):
            raise ValidationError(
                f"arities differ: {self.f.n}, {self.g.n}, {self.h.n}"
            )

    @property
    def n(self) -> int:
        return self.f.n

    @property
    def functions(self) -> tuple[BooleanFunction, BooleanFunction, BooleanFunction]:
        return (self.f, self.g, self.h)


@dataclass(frozen=True)
class WResult:
    """Outcome of one irrationality-probability computation.

    ``base`` is ``p1 p2 p3 + (1-p1)(1-p2)(1-p3)``; for ``method="formula"``
    the identity ``w == base + sum(cross_terms)`` holds to 1e-12 and
    ``cross_terms[k]`` pairs with ``deltas[k]`` as (f,g), (g,h), (h,f).
    """

    w: float
    base: float
    method: str
    n: int
    cross_terms: tuple[float, float, float] | None = None
    deltas: tuple[float, float, float] | None = None
    samples: int | None = None
    seed: int | None = None
    stderr: float | None = None

    def __post_init__(self) -> None:
        if not -1e-12 <= self.w <= 1.0 + 1e-12:
            raise ValidationError(f"probability {self.w!r} outside [0, 1]")

    def to_json_dict(self) -> dict:
        out = {
            "w": self.w,
            "base": self.base,
            "method": self.method,
            "n": self.n,
            "cross_terms": list(self.cross_terms) if self.cross_terms else None,
            "deltas": list(self.deltas) if self.deltas else None,
        }
        if self.method == "monte_carlo":
            out.update(samples=self.samples, seed=self.seed, stderr=self.stderr)
        return out


def _delta_mask_weights(n: int, delta: float) -> np.ndarray:
    # delta^{|S|} per mask with the empty set zeroed out; the n+1 level
    # powers are computed once and gathered.
    powers = np.power(float(delta), np.arange(n + 1, dtype=np.float64))
    weights = powers[mask_levels(n)]
    weights[0] = 0.0
    return weights


def biased_inner_product(sf: PseudoSpectrum, sg: PseudoSpectrum, delta: float) -> float:
    """``sum over nonempty S of sf[S] sg[S] delta^{|S|}``."""
    if sf.n != sg.n:
        raise ValidationError(f"arities differ: {sf.n} != {sg.n}")
    if not -1.0 <= delta <= 1.0:
        raise ValidationError(f"delta must lie in [-1, 1], got {delta!r}")
    weights = _delta_mask_weights(sf.n, delta)
    return float(np.sum(sf.coeffs * sg.coeffs * weights))


def noise_operator_spectral(s: PseudoSpectrum, eps: float) -> PseudoSpectrum:
    """Attenuate level-``k`` coefficients by ``eps^k``."""
    if not -1.0 <= eps <= 1.0:
        raise ValidationError(f"eps must lie in [-1, 1], got {eps!r}")
    powers = np.power(float(eps), np.arange(s.n + 1, dtype=np.float64))
    return PseudoSpectrum(s.n, s.coeffs * powers[mask_levels(s.n)])


def noise_operator_convolution(f: BooleanFunction, eps: float) -> np.ndarray:
    """Exact noisy average ``x -> E[f(x xor y)]``.

    Each coordinate of ``y`` is independently 0 with probability
    ``(1+eps)/2`` and 1 with probability ``(1-eps)/2``; the expectation is
    evaluated by one averaging pass per coordinate.
    """
    if not -1.0 <= eps <= 1.0:
        raise ValidationError(f"eps must lie in [-1, 1], got {eps!r}")
    keep = (1.0 + eps) / 2.0
    flip = (1.0 - eps) / 2.0
    values = f.table.astype(np.float64)
    for i in range(f.n):
        v = values.reshape(-1, 2, 1 << i)
        low = v[:, 0, :].copy()
        v[:, 0, :] = keep * low + flip * v[:, 1, :]
        v[:, 1, :] = flip * low + keep * v[:, 1, :]
    return values


def _base_term(p1: float, p2: float, p3: float) -> float:
    return p1 * p2 * p3 + (1 - p1) * (1 - p2) * (1 - p3)


def _w_from_coeff_vectors(
    sf: PseudoSpectrum,
    sg: PseudoSpectrum,
    sh: PseudoSpectrum,
    d: EvenProductDistribution,
    method: str,
) -> WResult:
    if not (sf.n == sg.n == sh.n):
        raise ValidationError(f"arities differ: {sf.n}, {sg.n}, {sh.n}")
    d1, d2, d3 = d.deltas
    cross = (
        biased_inner_product(sf, sg, d1),
        biased_inner_product(sg, sh, d2),
        biased_inner_product(sh, sf, d3),
    )
    base = _base_term(sf.mean, sg.mean, sh.mean)
    return WResult(
        w=base + cross[0] + cross[1] + cross[2],
        base=base,
        method=method,
        n=sf.n,
        cross_terms=cross,
        deltas=(d1, d2, d3),
    )


@functools.lru_cache(maxsize=4096)
def _small_spectrum(f: BooleanFunction) -> PseudoSpectrum:
    return walsh_transform(f)


def _spectrum(f: BooleanFunction) -> PseudoSpectrum:
    # Small tables recur heavily in exhaustive scans; cache those only.
    return _small_spectrum(f) if f.n <= 8 else walsh_transform(f)


def w_formula(gswf: Gswf, d: EvenProductDistribution) -> WResult:
    """Closed-form ``W`` for an even product distribution."""
    sf, sg, sh = (_spectrum(fn) for fn in gswf.functions)
    return _w_from_coeff_vectors(sf, sg, sh, d, "formula")


def w_from_spectra(
    sf: PseudoSpectrum,
    sg: PseudoSpectrum,
    sh: PseudoSpectrum,
    d: EvenProductDistribution,
) -> WResult:
    """The same closed form applied to raw coefficient vectors.

    No Booleanity is demanded, so this also evaluates coefficient patterns
    that no genuine Boolean function realizes.
    """
    return _w_from_coeff_vectors(sf, sg, sh, d, "formula")


@functools.lru_cache(maxsize=4)
def _profile_tables(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Digit matrix and (x, y, z) input masks for all 6^n profiles."""
    total = 6**n
    idx = np.arange(total, dtype=np.int64)
    digits = np.empty((n, total), dtype=np.uint8)
    for i in range(n):
        digits[i] = idx % 6
        idx //= 6
    masks = []
    for c in range(3):
        bits = _TRIPLE_BITS[:, c]
        m = np.zeros(total, dtype=np.int32)
        for i in range(n):
            m |= bits[digits[i]].astype(np.int32) << i
        masks.append(bfn._frozen(m))
    digits.setflags(write=False)
    return (digits, *masks)


def _irrational_indicator(
    ft: np.ndarray, gt: np.ndarray, ht: np.ndarray, xm, ym, zm
) -> np.ndarray:
    a, b, c = ft[xm], gt[ym], ht[zm]
    return (a & b & c) | ((1 - a) & (1 - b) & (1 - c))


def w_oracle(gswf: Gswf, t) -> WResult:
    """Exact ``W`` by enumerating all ``6^n`` admissible profiles.

    Accepts any per-voter triple distribution (not only even product ones)
    and shares no code path with :func:`w_formula`.
    """
    t = as_triple_distribution(t)
    n = gswf.n
    if n > ORACLE_MAX:
        raise CapacityError(
            f"oracle enumerates 6^n profiles and is limited to n <= {ORACLE_MAX}; "
            "use w_monte_carlo for larger arities"
        )
    ft, gt, ht = (fn.table for fn in gswf.functions)
    pvals = t.p
    total = 6**n
    acc = 0.0
    if n <= _PROFILE_CACHE_MAX:
        digits, xm, ym, zm = _profile_tables(n)
        prob = np.prod(pvals[digits], axis=0)
        irr = _irrational_indicator(ft, gt, ht, xm, ym, zm)
        acc = float(prob @ irr.astype(np.float64))
    else:
        xbits, ybits, zbits = _TRIPLE_BITS[:, 0], _TRIPLE_BITS[:, 1], _TRIPLE_BITS[:, 2]
        for start in range(0, total, _ORACLE_BATCH):
            idx = np.arange(start, min(start + _ORACLE_BATCH, total), dtype=np.int64)
            prob = np.ones(idx.size, dtype=np.float64)
            xm = np.zeros(idx.size, dtype=np.int32)
            ym = np.zeros_like(xm)
            zm = np.zeros_like(xm)
            for i in range(n):
                d = (idx % 6).astype(np.uint8)
                idx //= 6
                prob *= pvals[d]
                xm |= xbits[d].astype(np.int32) << i
                ym |= ybits[d].astype(np.int32) << i
                zm |= zbits[d].astype(np.int32) << i
            irr = _irrational_indicator(ft, gt, ht, xm, ym, zm)
            acc += float(prob @ irr.astype(np.float64))
    p1, p2, p3 = (bfn.expectation(fn) for fn in gswf.functions)
    return WResult(w=acc, base=_base_term(p1, p2, p3), method="oracle", n=n)


def w_monte_carlo(gswf: Gswf, t, samples: int, seed: int) -> WResult:
    """Unbiased sampled estimate of ``W``, deterministic for a given seed."""
    t = as_triple_distribution(t)
    if samples < 1:
        raise ValidationError(f"samples must be >= 1, got {samples}")
    n = gswf.n
    ft, gt, ht = (fn.table for fn in gswf.functions)
    rng = np.random.default_rng(seed)
    shifts = np.arange(n, dtype=np.int64)
    chunk = max(1, min(samples, (1 << 22) // max(n, 1)))
    hits = 0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        draws = rng.choice(6, size=(m, n), p=t.p)
        trip = _TRIPLE_BITS[draws].astype(np.int64)
        xm = (trip[:, :, 0] << shifts).sum(axis=1)
        ym = (trip[:, :, 1] << shifts).sum(axis=1)
        zm = (trip[:, :, 2] << shifts).sum(axis=1)
        hits += int(_irrational_indicator(ft, gt, ht, xm, ym, zm).sum())
        done += m
    w = hits / samples
    p1, p2, p3 = (bfn.expectation(fn) for fn in gswf.functions)
    return WResult(
        w=w,
        base=_base_term(p1, p2, p3),
        method="monte_carlo",
        n=n,
        samples=samples,
        seed=seed,
        stderr=float(np.sqrt(w * (1 - w) / samples)),
    )


def _sign_ignored_inner_product(sf: PseudoSpectrum, sg: PseudoSpectrum) -> float:
    # -sum over nonempty S of |sf[S] sg[S] (-1/3)^{|S|}|
    weights = _delta_mask_weights(sf.n, -1.0 / 3.0)
    return -float(np.sum(np.abs(sf.coeffs * sg.coeffs * weights)))


def w_prime(gswf: Gswf) -> float:
    """Sign-ignored variant of the closed form at the uniform distribution.

    Every cross term is replaced by its absolute-value lower bound, so the
    result lower-bounds ``W`` but may itself be negative: the quantity
    witnesses that any bound discarding coefficient signs cannot prove
    nonnegativity of ``W`` in general.
    """
    sf, sg, sh = (_spectrum(fn) for fn in gswf.functions)
    base = _base_term(sf.mean, sg.mean, sh.mean)
    return (
        base
        + _sign_ignored_inner_product(sf, sg)
        + _sign_ignored_inner_product(sg, sh)
        + _sign_ignored_inner_product(sh, sf)
    )
