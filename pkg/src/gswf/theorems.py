"""Executable verification of the package's bounds, identities and examples.

Every check evaluates one stated inequality or identity numerically and
returns a :class:`BoundReport`.  Margins are oriented so that
``margin >= -tolerance`` means PASS, and every report carries a re-runnable
witness: enough data to recompute the worst-case quantity from scratch
(see :func:`reevaluate_witness`).

Expected-violation demonstrations (showing that a dropped hypothesis breaks
a bound) are flagged ``inverted``; they pass exactly when the violation is
exhibited.  Suite exit status ignores inverted checks by contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bfn, catalog
from .bfn import BooleanFunction, PseudoSpectrum, mask_levels, walsh_transform
from .dist import EvenProductDistribution, TripleDistribution, as_triple_distribution
from .errors import HypothesisViolation, ValidationError
from .rationality import (
    Gswf,
    _delta_mask_weights,
    biased_inner_product,
    w_formula,
    w_from_spectra,
    w_oracle,
    w_prime,
)
from .search import ClassFilter, _class_members, _spectra_matrix

TOL_EXACT = 1e-12
#: For quantities accumulated over 2^n-term sums at n >= 16.
TOL_BIG_SUM = 1e-9
#: For asymptotic-limit convergence claims.
TOL_LIMIT = 1e-2
#: Numerical floor certifying a strictly positive quantity.
STRICT_FLOOR = 1e-9

_DEFAULT_SEED = 20260810


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one bound verification.

    ``lhs`` and ``rhs`` are the two sides of the claim at the worst point
    found; ``margin`` is the oriented slack (PASS iff it clears
    ``-tolerance``).  ``witness`` re-evaluates to ``value`` via
    :func:`reevaluate_witness`.
    """

    name: str
    lhs: float
    rhs: float
    margin: float
    tolerance: float
    passed: bool
    witness: dict
    inverted: bool = False

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "inverted": self.inverted,
            "witness": self.witness,
        }


def _report(name, lhs, rhs, margin, tolerance, witness, inverted=False) -> BoundReport:
    return BoundReport(
        name=name,
        lhs=float(lhs),
        rhs=float(rhs),
        margin=float(margin),
        tolerance=float(tolerance),
        passed=bool(margin >= -tolerance),
        witness=witness,
        inverted=inverted,
    )


def _uniform() -> EvenProductDistribution:
    return EvenProductDistribution.uniform()


def _random_even_product(rng: np.random.Generator) -> EvenProductDistribution:
    v = rng.dirichlet((1.0, 1.0, 1.0)) / 2.0
    return EvenProductDistribution(float(v[0]), float(v[1]), float(v[2]))


def _dist_payload(dst) -> dict:
    if isinstance(dst, EvenProductDistribution):
        return {
            "type": "even",
            "alpha": dst.alpha,
            "beta": dst.beta,
            "gamma": dst.gamma,
        }
    t = as_triple_distribution(dst)
    return {"type": "triple", "p": [float(x) for x in t.p]}


def _dist_from_payload(payload: dict):
    if payload["type"] == "even":
        return EvenProductDistribution(payload["alpha"], payload["beta"], payload["gamma"])
    return TripleDistribution(np.asarray(payload["p"], dtype=np.float64))


def _triple_payload(fs) -> dict:
    f, g, h = fs
    return {"n": f.n, "f": f.hex, "g": g.hex, "h": h.hex}


def _functions_from_payload(w: dict):
    n = w["n"]
    return tuple(BooleanFunction.from_hex(n, w[k]) for k in ("f", "g", "h"))


# --------------------------------------------------------------------------
# worst-case plane scans shared by several checks
# --------------------------------------------------------------------------


def _cross_sum_planes(members, d: EvenProductDistribution):
    """Pairwise biased-product matrices for one class under ``d``."""
    n = members[0].n
    S = _spectra_matrix(members)
    d1, d2, d3 = d.deltas
    bfg = (S * _delta_mask_weights(n, d1)) @ S.T
    bgh = (S * _delta_mask_weights(n, d2)) @ S.T
    bhf = (S * _delta_mask_weights(n, d3)) @ S.T
    return S, bfg, bgh, bhf


def _extreme_cross_sum(members, d, maximize=True, restrict=None):
    """Extreme of ``W - base`` (the three cross terms) over class triples."""
    S, bfg, bgh, bhf = _cross_sum_planes(members, d)
    sel = np.arange(len(members), dtype=np.intp) if restrict is None else np.asarray(
        list(restrict), dtype=np.intp
    )
    bgh_sel = bgh if restrict is None else bgh[np.ix_(sel, sel)]
    best = None
    for i in sel:
        row = bfg[i] if restrict is None else bfg[i][sel]
        col = bhf[:, i] if restrict is None else bhf[sel, i]
        plane = row[:, None] + bgh_sel + col[None, :]
        flat = int(np.argmax(plane) if maximize else np.argmin(plane))
        value = float(plane.flat[flat])
        if best is None or (value > best[0] if maximize else value < best[0]):
            j, k = np.unravel_index(flat, plane.shape)
            best = (value, (int(i), int(sel[j]), int(sel[k])))
    return best


# --------------------------------------------------------------------------
# checks
# --------------------------------------------------------------------------


def check_formula_vs_oracle(
    n_max: int = 4, trials: int = 60, dists: int = 10, seed: int = _DEFAULT_SEED
) -> BoundReport:
    """Closed form versus exhaustive enumeration.

    Exhaustive over all function triples for n <= 2, random triples above,
    each against random even product distributions.  The claim is exact
    agreement, so the margin is the worst absolute difference.
    """
    rng = np.random.default_rng(seed)
    worst = -1.0
    worst_wit = None
    for n in range(1, n_max + 1):
        distributions = [_random_even_product(rng) for _ in range(dists)]
        if n <= 2:
            size = 1 << (1 << n)
            pool = [BooleanFunction.from_packed(n, v) for v in range(size)]
            triples = [
                (pool[a], pool[b], pool[c])
                for a in range(size)
                for b in range(size)
                for c in range(size)
            ]
        else:
            triples = [
                tuple(bfn.random_function(n, rng) for _ in range(3))
                for _ in range(trials)
            ]
        for d in distributions:
            for fs in triples:
                gswf = Gswf(*fs)
                diff = abs(w_formula(gswf, d).w - w_oracle(gswf, d).w)
                if diff > worst:
                    worst = diff
                    worst_wit = (fs, d)
    fs, d = worst_wit
    witness = {
        "kind": "w_triple",
        "value": w_formula(Gswf(*fs), d).w,
        "method": "formula",
        "dist": _dist_payload(d),
        **_triple_payload(fs),
        "extra": {"worst_abs_diff": worst},
    }
    return _report(
        "formula_vs_oracle",
        lhs=worst,
        rhs=0.0,
        margin=-worst,
        tolerance=TOL_EXACT,
        witness=witness,
    )


def check_monotone_bound(
    n: int = 3, d: EvenProductDistribution | None = None, mode: str = "exhaustive"
) -> BoundReport:
    """For monotone triples, ``W`` never exceeds the independent-base term.

    Requires ``alpha, beta, gamma <= 1/4`` (all noise parameters
    nonpositive); outside that hypothesis the bound is provably false, so
    the check refuses to run.  For balanced monotone triples the base is
    exactly 1/4, so the same scan certifies that rationality holds with
    probability at least 3/4 there.
    """
    d = d or _uniform()
    if max(d.alpha, d.beta, d.gamma) > 0.25 + TOL_EXACT:
        raise HypothesisViolation(
            "monotone bound requires alpha, beta, gamma <= 1/4; "
            f"got ({d.alpha}, {d.beta}, {d.gamma})"
        )
    if mode != "exhaustive":
        raise ValidationError(f"unsupported mode {mode!r}")
    members = _class_members(n, ClassFilter(("monotone",)))
    value, (i, j, k) = _extreme_cross_sum(members, d, maximize=True)
    worst_triple = (members[i], members[j], members[k])
    balanced_idx = [i for i, f in enumerate(members) if bfn.is_balanced(f)]
    bal_value, (bi, bj, bk) = _extreme_cross_sum(
        members, d, maximize=True, restrict=balanced_idx
    )
    balanced_max_w = 0.25 + bal_value
    extra = {
        "balanced_max_w": balanced_max_w,
        "balanced_witness": _triple_payload(
            (members[bi], members[bj], members[bk])
        ),
        "balanced_count": len(balanced_idx),
        "monotone_count": len(members),
    }
    if n >= 3:
        split = catalog.preset_gswf("split_dictators", n)
        res = w_formula(split, d)
        extra["split_dictators_w_minus_base"] = res.w - res.base
    witness = {
        "kind": "cross_sum_triple",
        "value": value,
        "dist": _dist_payload(d),
        **_triple_payload(worst_triple),
        "extra": extra,
    }
    return _report(
        "monotone_bound",
        lhs=value,
        rhs=0.0,
        margin=-value,
        tolerance=TOL_EXACT,
        witness=witness,
    )


_DELTA_GRID = (-1.0, -2.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 1.0)


def _pairwise_scaled_products(members, delta_grid):
    n = members[0].n
    S = _spectra_matrix(members)
    out = []
    for delta in delta_grid:
        if delta == 0.0:
            continue
        M = (S * _delta_mask_weights(n, delta)) @ S.T / delta
        out.append((delta, M))
    return out


def check_biased_product_sign(
    n: int = 3, delta_grid=_DELTA_GRID
) -> BoundReport:
    """``(1/delta) <<f, g>>_delta >= 0`` for monotone increasing pairs."""
    if n > 4:
        raise ValidationError("exhaustive monotone-pair scan is limited to n <= 4")
    members = _class_members(n, ClassFilter(("monotone",)))
    worst = None
    for delta, M in _pairwise_scaled_products(members, delta_grid):
        flat = int(np.argmin(M))
        value = float(M.flat[flat])
        if worst is None or value < worst[0]:
            i, j = np.unravel_index(flat, M.shape)
            worst = (value, delta, members[int(i)], members[int(j)])
    value, delta, f, g = worst
    witness = {
        "kind": "scaled_biased_pair",
        "value": value,
        "n": n,
        "f": f.hex,
        "g": g.hex,
        "delta": delta,
        "extra": {"pairs": len(members) ** 2, "delta_grid": list(delta_grid)},
    }
    return _report(
        "biased_product_sign",
        lhs=value,
        rhs=0.0,
        margin=value,
        tolerance=TOL_EXACT,
        witness=witness,
    )


def check_biased_product_sign_demo(
    n: int = 2, delta_grid=_DELTA_GRID, required_depth: float = 1e-6
) -> BoundReport:
    """Dropping monotonicity breaks the sign law; exhibit a violation.

    Inverted check: passes when some non-monotone pair drives the scaled
    product at least ``required_depth`` below zero.
    """
    all_f = [BooleanFunction.from_packed(n, v) for v in range(1 << (1 << n))]
    members = [f for f in all_f if not bfn.is_monotone(f)]
    worst = None
    for delta, M in _pairwise_scaled_products(members, delta_grid):
        flat = int(np.argmin(M))
        value = float(M.flat[flat])
        if worst is None or value < worst[0]:
            i, j = np.unravel_index(flat, M.shape)
            worst = (value, delta, members[int(i)], members[int(j)])
    value, delta, f, g = worst
    witness = {
        "kind": "scaled_biased_pair",
        "value": value,
        "n": n,
        "f": f.hex,
        "g": g.hex,
        "delta": delta,
        "extra": {"required_depth": required_depth},
    }
    return _report(
        "biased_product_sign_nonmonotone_demo",
        lhs=value,
        rhs=-required_depth,
        margin=-required_depth - value,
        tolerance=0.0,
        witness=witness,
        inverted=True,
    )


def check_fkg(n: int = 3, trials: int = 400, seed: int = _DEFAULT_SEED) -> BoundReport:
    """Monotone increasing pairs correlate nonnegatively; mixed pairs reverse.

    Exhaustive over monotone pairs for n <= 3, sampled above.
    """
    members = list(_class_members(n, ClassFilter(("monotone",))))
    if n > 3:
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, len(members), size=(trials, 2))
        pairs = [(members[int(a)], members[int(b)]) for a, b in idx]
    else:
        pairs = [(f, g) for f in members for g in members]
    scale = float(1 << n)
    worst = None
    for f, g in pairs:
        ef = bfn.expectation(f)
        eg = bfn.expectation(g)
        efg = float(np.dot(f.table.astype(np.float64), g.table.astype(np.float64))) / scale
        cov = efg - ef * eg
        # reversed orientation: g decreasing realized as 1 - g
        g_dec = BooleanFunction(n, 1 - g.table)
        efg_mixed = (
            float(np.dot(f.table.astype(np.float64), g_dec.table.astype(np.float64)))
            / scale
        )
        rev = ef * bfn.expectation(g_dec) - efg_mixed
        for orientation, value, other in (
            ("increasing", cov, g),
            ("reversed", rev, g_dec),
        ):
            if worst is None or value < worst[0]:
                worst = (value, orientation, f, other)
    value, orientation, f, g = worst
    witness = {
        "kind": "covariance_pair",
        "value": value,
        "n": n,
        "f": f.hex,
        "g": g.hex,
        "orientation": orientation,
        "extra": {"pairs": len(pairs)},
    }
    return _report(
        "fkg",
        lhs=value,
        rhs=0.0,
        margin=value,
        tolerance=TOL_EXACT,
        witness=witness,
    )


def pseudo_extremal_spectra(n: int = 3, trio=(0, 1, 2)):
    """Coefficient triple that mimics balanced functions but is not Boolean.

    Means are 1/2 and all other mass sits on three singleton levels with
    values ``2a, -a, -a`` (rotated per function), ``a = 1/(2 sqrt 6)``; the
    squared mass adds to 1/4 as for a genuine balanced function.
    """
    if n < 3:
        raise ValidationError("the pattern needs at least three voters")
    i, j, k = trio
    a = 1.0 / (2.0 * math.sqrt(6.0))
    out = []
    for lead in range(3):
        coeffs = np.zeros(1 << n)
        coeffs[0] = 0.5
        for pos, voter in enumerate((i, j, k)):
            coeffs[1 << voter] = 2.0 * a if pos == lead else -a
        out.append(PseudoSpectrum(n, coeffs))
    return tuple(out)


def second_level_example(n: int = 2) -> Gswf:
    """Balanced triple with all nonempty mass on level two: equality of the
    two pairwise choices for voters 1 and 2, used three times."""
    if n < 2:
        raise ValidationError("needs at least two voters")
    x = np.arange(1 << n, dtype=np.int64)
    table = (((x & 1) ^ ((x >> 1) & 1)) ^ 1).astype(np.uint8)
    f = BooleanFunction(n, table)
    return Gswf(f, f, f)


def first_level_example(n: int = 2, voter: int = 1) -> Gswf:
    """The triple (x_i, x_i, 1 - x_i), all mass on level one."""
    d = catalog.dictator(n, voter)
    return Gswf(d, d, BooleanFunction(n, 1 - d.table))


def check_balanced_bound(
    n: int = 2,
    mode: str = "exhaustive",
    trials: int = 10_000,
    seed: int = _DEFAULT_SEED,
) -> BoundReport:
    """Balanced triples under the uniform distribution satisfy ``W <= 3/8``.

    Also evaluates the three reference points: the non-Boolean extremal
    coefficient pattern reaching exactly 3/8, and the two balanced Boolean
    examples (first-level and second-level) reaching exactly 1/3.
    """
    d = _uniform()
    members = _class_members(n, ClassFilter(("balanced",)))
    if mode == "exhaustive":
        value, (i, j, k) = _extreme_cross_sum(members, d, maximize=True)
        best = (members[i], members[j], members[k])
        count = len(members) ** 3
    elif mode == "random":
        rng = np.random.default_rng(seed)
        S = _spectra_matrix(members)
        picks = [rng.integers(0, len(members), size=trials) for _ in range(3)]
        rows = [S[p] for p in picks]
        w = _delta_mask_weights(n, -1.0 / 3.0)
        cross = (
            (rows[0] * w * rows[1]).sum(axis=1)
            + (rows[1] * w * rows[2]).sum(axis=1)
            + (rows[2] * w * rows[0]).sum(axis=1)
        )
        t = int(np.argmax(cross))
        value = float(cross[t])
        best = tuple(members[int(p[t])] for p in picks)
        count = trials
    else:
        raise ValidationError(f"unsupported mode {mode!r}")
    max_w = 0.25 + value
    pseudo_w = w_from_spectra(*pseudo_extremal_spectra(max(n, 3)), d).w
    first_w = w_formula(first_level_example(max(n, 2)), d).w
    second_w = w_formula(second_level_example(max(n, 2)), d).w
    witness = {
        "kind": "w_triple",
        "value": max_w,
        "method": "formula",
        "dist": _dist_payload(d),
        **_triple_payload(best),
        "extra": {
            "triples_scanned": count,
            "pseudo_extremal_w": pseudo_w,
            "first_level_example_w": first_w,
            "second_level_example_w": second_w,
        },
    }
    return _report(
        "balanced_bound",
        lhs=max_w,
        rhs=0.375,
        margin=0.375 - max_w,
        tolerance=TOL_EXACT,
        witness=witness,
    )


def check_lemma_power_sums(k_max: int = 6, grid_steps: int = 200) -> BoundReport:
    """``x^3+y^3+z^3 >= x^(2k+1)+y^(2k+1)+z^(2k+1)`` on the slice
    ``x+y+z = 1`` of the cube ``[-1,1]^3``, for integer ``k >= 1``.

    Checked on a regular grid (step ``1/grid_steps``); the identity is
    exact on the slice boundary.
    """
    if k_max < 1:
        raise ValidationError("k_max must be >= 1")
    axis = np.arange(-grid_steps, grid_steps + 1, dtype=np.float64) / grid_steps
    X, Y = np.meshgrid(axis, axis, indexing="ij")
    Z = 1.0 - X - Y
    ok = np.abs(Z) <= 1.0 + 1e-15
    x, y, z = X[ok], Y[ok], Z[ok]
    cubes = x**3 + y**3 + z**3
    worst = None
    for k in range(1, k_max + 1):
        e = 2 * k + 1
        diff = cubes - (x**e + y**e + z**e)
        t = int(np.argmin(diff))
        value = float(diff[t])
        if worst is None or value < worst[0]:
            worst = (value, k, float(x[t]), float(y[t]), float(z[t]))
    value, k, wx, wy, wz = worst
    # boundary family x = 1, y = t, z = -t: both sides collapse to 1
    t = np.arange(-grid_steps, grid_steps + 1, dtype=np.float64) / grid_steps
    e = 2 * k_max + 1
    boundary_dev = float(
        np.max(np.abs((1.0 + t**3 + (-t) ** 3) - (1.0 + t**e + (-t) ** e)))
    )
    witness = {
        "kind": "power_sum_point",
        "value": value,
        "x": wx,
        "y": wy,
        "z": wz,
        "k": k,
        "extra": {
            "grid_points": int(ok.sum()),
            "boundary_max_dev": boundary_dev,
        },
    }
    return _report(
        "lemma_power_sums",
        lhs=value,
        rhs=0.0,
        margin=value,
        tolerance=TOL_EXACT,
        witness=witness,
    )


def majority_first_level_mass(n: int) -> float:
    """Exact sum of squared level-1 coefficients of majority on ``n`` voters."""
    if n % 2 == 0:
        raise ValidationError("majority requires odd arity")
    single = math.comb(n - 1, (n - 1) // 2) / float(1 << n)
    return n * single * single


def check_neutral_symmetric_bound(
    n_list=(3, 5, 7, 9, 11, 13, 15, 17, 19),
    d: EvenProductDistribution | None = None,
) -> BoundReport:
    """For the majority triple, ``W`` dominates the first-level floor
    ``(1/4 - d_m) (1 + (4a-1)^3 + (4b-1)^3 + (4c-1)^3)``.

    ``d_m`` is majority's level-1 squared mass; at ``n = 3`` under the
    uniform distribution the two sides agree exactly (majority has mass
    only on levels 1 and 3).
    """
    d = d or _uniform()
    d1, d2, d3 = d.deltas
    factor = 1.0 + d1**3 + d2**3 + d3**3
    rows = []
    worst = None
    for n in n_list:
        gswf = catalog.preset_gswf("condorcet", n)
        w = w_formula(gswf, d).w
        dm = majority_first_level_mass(n)
        spectral_dm = float(bfn.level_weights(walsh_transform(gswf.f))[1])
        rhs = (0.25 - dm) * factor
        rows.append(
            {"n": n, "w": w, "rhs": rhs, "d_m": dm, "d_m_spectral": spectral_dm}
        )
        if worst is None or (w - rhs) < worst[0]:
            worst = (w - rhs, n, w, rhs)
    margin, n_star, w_star, rhs_star = worst
    asymptotic = (0.25 - 1.0 / (2.0 * math.pi)) * factor
    witness = {
        "kind": "eq_floor_row",
        "value": w_star,
        "n": n_star,
        "dist": _dist_payload(d),
        "extra": {
            "rows": rows,
            "asymptotic_constant": asymptotic,
            "cubic_factor": factor,
        },
    }
    return _report(
        "neutral_symmetric_bound",
        lhs=w_star,
        rhs=rhs_star,
        margin=margin,
        tolerance=TOL_EXACT,
        witness=witness,
    )


def majority_self_correlation(n: int, rho: float) -> float:
    """``<<maj_n, maj_n>>_rho`` from the spectrum."""
    s = walsh_transform(catalog.majority(n))
    return biased_inner_product(s, s, rho)


def check_majority_stability(
    n_list=(3, 5, 7, 9, 11, 13, 15, 17, 19),
    rho_grid=(0.0, 1.0 / 3.0, 0.5, 0.8, 1.0),
) -> BoundReport:
    """``<<maj_n, maj_n>>_rho -> arcsin(rho) / (2 pi)``.

    The absolute error must be non-increasing in ``n`` at every grid point
    and at most 0.01 at the largest arity.
    """
    errs = {}
    for n in n_list:
        s = walsh_transform(catalog.majority(n))
        errs[n] = [
            abs(biased_inner_product(s, s, r) - math.asin(r) / (2.0 * math.pi))
            for r in rho_grid
        ]
    ns = list(n_list)
    mono_margin = min(
        errs[a][j] - errs[b][j]
        for a, b in zip(ns, ns[1:])
        for j in range(len(rho_grid))
    )
    final_errs = errs[ns[-1]]
    j_worst = int(np.argmax(final_errs))
    final = final_errs[j_worst]
    margin = min(mono_margin, TOL_LIMIT - final)
    witness = {
        "kind": "stability_point",
        "value": final,
        "n": ns[-1],
        "rho": rho_grid[j_worst],
        "extra": {
            "errors": {str(n): errs[n] for n in ns},
            "rho_grid": list(rho_grid),
            "monotonicity_margin": mono_margin,
        },
    }
    return _report(
        "majority_stability",
        lhs=final,
        rhs=TOL_LIMIT,
        margin=margin,
        tolerance=TOL_BIG_SUM,
        witness=witness,
    )


def check_dual_claim(n_max: int = 3) -> BoundReport:
    """Dual-function spectra obey ``coeff'(S) = (-1)^(|S|-1) coeff(S)``
    for nonempty ``S``; exhaustive over all functions up to ``n_max``."""
    worst = None
    for n in range(1, n_max + 1):
        signs = np.where(mask_levels(n) & 1, 1.0, -1.0)  # (-1)^(|S|-1)
        for packed in range(1 << (1 << n)):
            f = BooleanFunction.from_packed(n, packed)
            sf = walsh_transform(f).coeffs
            sd = walsh_transform(bfn.dual(f)).coeffs
            dev = np.abs(sd - signs * sf)
            dev[0] = 0.0
            value = float(dev.max())
            if worst is None or value > worst[0]:
                worst = (value, f)
    value, f = worst
    witness = {"kind": "dual_function", "value": value, "n": f.n, "f": f.hex}
    return _report(
        "dual_claim",
        lhs=value,
        rhs=0.0,
        margin=-value,
        tolerance=TOL_EXACT,
        witness=witness,
    )


def check_lower_bound_biased(
    n: int = 2, delta_grid=(-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0)
) -> BoundReport:
    """``<<f, g>>_delta >= -min(p1 p2, (1-p1)(1-p2))`` for Boolean pairs.

    Equality holds when a function is constant 0 (first form) or constant 1
    (second form).  Strict positivity of the slack is certified for
    non-constant pairs at interior ``delta`` only: at ``|delta| = 1`` the
    noisy average no longer mixes and disjoint-support pairs reach equality
    (e.g. the indicators of ``x = 0`` and ``x = all-ones`` at delta 1).
    """
    if n > 4:
        raise ValidationError("exhaustive pair scan is limited to n <= 4")
    members = [BooleanFunction.from_packed(n, v) for v in range(1 << (1 << n))]
    S = _spectra_matrix(members)
    p = S[:, 0]
    floor_matrix = np.minimum(np.multiply.outer(p, p), np.multiply.outer(1 - p, 1 - p))
    nonconst = np.array([not bfn.is_constant(f) for f in members])
    const_mask = ~nonconst
    worst = None
    strict_min = None
    equality_dev = 0.0
    for delta in delta_grid:
        M = (S * _delta_mask_weights(n, delta)) @ S.T
        slack = M + floor_matrix
        flat = int(np.argmin(slack))
        value = float(slack.flat[flat])
        if worst is None or value < worst[0]:
            i, j = np.unravel_index(flat, slack.shape)
            worst = (value, delta, members[int(i)], members[int(j)])
        if abs(delta) < 1.0:
            sub = slack[np.ix_(nonconst, nonconst)]
            v = float(sub.min())
            if strict_min is None or v < strict_min[0]:
                idx = np.unravel_index(int(np.argmin(sub)), sub.shape)
                keep = np.flatnonzero(nonconst)
                strict_min = (v, delta, members[int(keep[idx[0]])], members[int(keep[idx[1]])])
        if const_mask.any():
            equality_dev = max(equality_dev, float(np.abs(slack[const_mask, :]).max()))
    value, delta, f, g = worst
    margin = min(value, strict_min[0] - STRICT_FLOOR, TOL_EXACT - equality_dev)
    witness = {
        "kind": "bounded_pair",
        "value": value,
        "n": n,
        "f": f.hex,
        "g": g.hex,
        "delta": delta,
        "extra": {
            "strict_min_nonconstant_interior": strict_min[0],
            "strict_witness": {"f": strict_min[2].hex, "g": strict_min[3].hex, "delta": strict_min[1]},
            "constant_equality_max_dev": equality_dev,
        },
    }
    return _report(
        "lower_bound_biased",
        lhs=value,
        rhs=0.0,
        margin=margin,
        tolerance=TOL_EXACT,
        witness=witness,
    )


def check_arrow_sum_condition(n: int = 2) -> BoundReport:
    """Non-constant triples with ``p1 + p2 + p3 <= 1`` have ``W > 0``."""
    d = _uniform()
    members = [
        BooleanFunction.from_packed(n, v)
        for v in range(1 << (1 << n))
        if 0 < bin(v).count("1") < (1 << n)
    ]
    S, bfg, bgh, bhf = _cross_sum_planes(members, d)
    p = S[:, 0]
    best = None
    eligible = 0
    for i in range(len(members)):
        sum_ok = p[i] + p[:, None] + p[None, :] <= 1.0 + 1e-15
        if not sum_ok.any():
            continue
        base = p[i] * np.multiply.outer(p, p) + (1 - p[i]) * np.multiply.outer(
            1 - p, 1 - p
        )
        plane = base + bfg[i][:, None] + bgh + bhf[:, i][None, :]
        plane = np.where(sum_ok, plane, np.inf)
        eligible += int(sum_ok.sum())
        flat = int(np.argmin(plane))
        value = float(plane.flat[flat])
        if best is None or value < best[0]:
            j, k = np.unravel_index(flat, plane.shape)
            best = (value, (members[i], members[int(j)], members[int(k)]))
    value, fs = best
    witness = {
        "kind": "w_triple",
        "value": value,
        "method": "formula",
        "dist": _dist_payload(d),
        **_triple_payload(fs),
        "extra": {"eligible_triples": eligible},
    }
    return _report(
        "arrow_sum_condition",
        lhs=value,
        rhs=STRICT_FLOOR,
        margin=value - STRICT_FLOOR,
        tolerance=0.0,
        witness=witness,
    )


def w_prime_first_level_bound(n: int) -> float:
    """Upper bound on the sign-ignored ``W`` of the AND / dual / majority
    triple keeping only the base and one first-level cross term:
    ``2^-n (1 - 2^-n) - (n/3) C(n-1, (n-1)/2) 4^-n``.

    Valid because every discarded term is nonpositive; evaluated in
    log space so large arities stay finite.
    """
    if n % 2 == 0:
        raise ValidationError("the construction requires odd arity")
    log2_binom = (math.lgamma(n) - 2.0 * math.lgamma((n + 1) / 2.0)) / math.log(2.0)
    first_level = (n / 3.0) * 2.0 ** (log2_binom - 2.0 * n)
    return 2.0**-n - 4.0**-n - first_level


def check_w_prime_negative(
    n_large: int = 61, scan_max: int = 101, required_depth: float = 1e-21
) -> BoundReport:
    """The sign-ignored variant of ``W`` goes negative for large arity.

    Inverted check: passes when the first-level bound certifies a strictly
    negative value at ``n_large`` while the small-arity value
    (AND, OR, majority on three voters) stays strictly positive.  The scan
    records where the bound stops decreasing (it bottoms out once the
    binomial term is overtaken by the base's decay).
    """
    bound_large = w_prime_first_level_bound(n_large)
    small = w_prime(catalog.preset_gswf("and_dual_majority", 3))
    scan = [(m, w_prime_first_level_bound(m)) for m in range(3, scan_max + 1, 2)]
    values = [b for _, b in scan]
    peak_idx = int(np.argmax(values))
    min_idx = int(np.argmin(values))
    decreasing_to_min = all(
        values[i] > values[i + 1] for i in range(peak_idx, min_idx)
    )
    margin = min(
        -required_depth - bound_large,
        small - STRICT_FLOOR,
        0.0 if (peak_idx == 0 and decreasing_to_min) else -1.0,
    )
    witness = {
        "kind": "first_level_bound",
        "value": bound_large,
        "n": n_large,
        "extra": {
            "w_prime_small_triple": small,
            "scan_peak_n": scan[peak_idx][0],
            "scan_min_n": scan[min_idx][0],
            "first_negative_n": next((m for m, b in scan if b < 0), None),
            "decreasing_from_peak_to_min": decreasing_to_min,
        },
    }
    return _report(
        "w_prime_negative_demo",
        lhs=bound_large,
        rhs=-required_depth,
        margin=margin,
        tolerance=0.0,
        witness=witness,
        inverted=True,
    )


def _exact_expectations(gswf: Gswf) -> tuple[float, float, float]:
    return tuple(bfn.expectation(fn) for fn in gswf.functions)


def check_instability_example(
    n_list=(5, 7, 9, 11, 13, 15),
    q: float = 0.2,
    and_n_list=(3, 5, 7, 9, 11, 13, 15),
    q_grid=tuple(round(0.05 * i, 2) for i in range(1, 10)),
) -> BoundReport:
    """Arbitrarily unstable rules: small ``W`` despite non-trivial margins.

    Three parts: (i) the AND / dual / majority triple has
    ``0 < W <= 0.471^n``; (ii) the threshold construction keeps every
    component expectation above ``eta = 2^{n (H(q) - 1)} / (n + 1)``
    (asserted where ``q n >= 1``, the range where the binomial entropy
    estimate has content), and the ratio ``W / eta`` is required to
    decrease strictly along ``n_list``; (iii) the exponent comparison
    ``q - 1.08 < H(q) - 1`` holds on the ``q`` grid.

    The strict-decrease clause of (ii) is evaluated exactly as stated even
    though the ceiling in the threshold cutoff makes the realized fraction
    oscillate, which breaks monotonicity at small arity; a failure here is
    reported, not masked.
    """
    d = _uniform()
    margins = []
    # (i) AND / dual / majority decay envelope
    and_rows = []
    for n in and_n_list:
        w = w_formula(catalog.preset_gswf("and_dual_majority", n), d).w
        cap = 0.471**n
        and_rows.append({"n": n, "w": w, "cap": cap})
        margins.append(w - STRICT_FLOOR)  # strictly positive
        margins.append(cap - w)
    # (ii) threshold construction: expectation floor and ratio decay
    rows = []
    for n in n_list:
        gswf = catalog.preset_gswf("threshold_instability", n, q=q)
        ps = _exact_expectations(gswf)
        w = w_formula(gswf, d).w
        e = catalog.eta(n, q)
        row = {
            "n": n,
            "cutoff": catalog.instability_cutoff(n, q),
            "w": w,
            "eta": e,
            "ratio": w / e,
            "min_expectation": min(ps),
            "floor_asserted": math.floor(q * n) >= 1,
        }
        rows.append(row)
        if row["floor_asserted"]:
            margins.append(row["min_expectation"] - e)
    ratio_steps = []
    for prev, nxt in zip(rows, rows[1:]):
        step = prev["ratio"] - nxt["ratio"]
        ratio_steps.append({"from_n": prev["n"], "to_n": nxt["n"], "decrease": step})
        margins.append(step - 1e-15)
    # (iii) exponent inequality
    exponent_rows = []
    for qq in q_grid:
        gap = (catalog.binary_entropy(qq) - 1.0) - (qq - 1.08)
        exponent_rows.append({"q": qq, "gap": gap})
        margins.append(gap)
    margin = min(margins)
    worst_step = min(ratio_steps, key=lambda r: r["decrease"]) if ratio_steps else None
    witness = {
        "kind": "instability_ratio_pair",
        "value": worst_step["decrease"] if worst_step else 0.0,
        "q": q,
        "from_n": worst_step["from_n"] if worst_step else None,
        "to_n": worst_step["to_n"] if worst_step else None,
        "extra": {
            "and_rows": and_rows,
            "threshold_rows": rows,
            "ratio_steps": ratio_steps,
            "exponent_rows": exponent_rows,
        },
    }
    lhs = worst_step["decrease"] if worst_step else margin
    return _report(
        "instability_example",
        lhs=lhs,
        rhs=0.0,
        margin=margin,
        tolerance=TOL_EXACT,
        witness=witness,
    )


def _even_product_grid(steps: int = 4):
    """Even product distributions with alpha, beta on an eighth grid."""
    out = []
    for a_i in range(steps + 1):
        for b_i in range(steps + 1):
            a = a_i / (2.0 * steps)
            b = b_i / (2.0 * steps)
            c = 0.5 - a - b
            if c >= -1e-12:
                out.append(EvenProductDistribution(a, b, max(c, 0.0)))
    return out


def check_alpha_half_ceiling(
    n: int = 4, trials: int = 10_000, seed: int = _DEFAULT_SEED
) -> BoundReport:
    """Balanced monotone triples never exceed ``W = 1/2`` under any even
    product distribution; the two-dictator rule at ``alpha = 1/2`` attains
    it exactly."""
    rng = np.random.default_rng(seed)
    members = _class_members(n, ClassFilter(("balanced", "monotone")))
    S = _spectra_matrix(members)
    picks = [rng.integers(0, len(members), size=trials) for _ in range(3)]
    rows = [S[p] for p in picks]
    grid = _even_product_grid()
    worst = None
    for d in grid:
        d1, d2, d3 = d.deltas
        cross = (
            (rows[0] * _delta_mask_weights(n, d1) * rows[1]).sum(axis=1)
            + (rows[1] * _delta_mask_weights(n, d2) * rows[2]).sum(axis=1)
            + (rows[2] * _delta_mask_weights(n, d3) * rows[0]).sum(axis=1)
        )
        w = 0.25 + cross  # balanced triples: base is exactly 1/4
        t = int(np.argmax(w))
        value = float(w[t])
        if worst is None or value > worst[0]:
            worst = (value, d, tuple(members[int(p[t])] for p in picks))
    corner = EvenProductDistribution(0.5, 0.0, 0.0)
    extremal_gswf = catalog.preset_gswf("alpha_half_extremal", n)
    extremal = w_formula(extremal_gswf, corner).w
    if extremal >= worst[0]:
        value, d, fs = extremal, corner, extremal_gswf.functions
    else:
        value, d, fs = worst
    max_w = value
    witness = {
        "kind": "w_triple",
        "value": value,
        "method": "formula",
        "dist": _dist_payload(d),
        **_triple_payload(fs),
        "extra": {
            "grid_size": len(grid),
            "sampled_triples": trials,
            "extremal_w_at_corner": extremal,
            "equality_attained": abs(extremal - 0.5) <= TOL_EXACT,
            "class_size": len(members),
        },
    }
    return _report(
        "alpha_half_ceiling",
        lhs=max_w,
        rhs=0.5,
        margin=0.5 - max_w,
        tolerance=TOL_EXACT,
        witness=witness,
    )


# --------------------------------------------------------------------------
# registry
# --------------------------------------------------------------------------

CHECKS = {
    "formula_vs_oracle": lambda seed: check_formula_vs_oracle(seed=seed),
    "monotone_bound": lambda seed: check_monotone_bound(),
    "biased_product_sign": lambda seed: check_biased_product_sign(),
    "biased_product_sign_nonmonotone_demo": lambda seed: check_biased_product_sign_demo(),
    "fkg": lambda seed: check_fkg(seed=seed),
    "balanced_bound": lambda seed: check_balanced_bound(seed=seed),
    "lemma_power_sums": lambda seed: check_lemma_power_sums(),
    "neutral_symmetric_bound": lambda seed: check_neutral_symmetric_bound(),
    "majority_stability": lambda seed: check_majority_stability(),
    "dual_claim": lambda seed: check_dual_claim(),
    "lower_bound_biased": lambda seed: check_lower_bound_biased(),
    "arrow_sum_condition": lambda seed: check_arrow_sum_condition(),
    "w_prime_negative_demo": lambda seed: check_w_prime_negative(),
    "instability_example": lambda seed: check_instability_example(),
    "alpha_half_ceiling": lambda seed: check_alpha_half_ceiling(seed=seed),
}


def run_all(seed: int = _DEFAULT_SEED, names=None) -> list[BoundReport]:
    """Run the selected checks (all by default), sorted by name."""
    selected = sorted(CHECKS) if names is None else list(names)
    unknown = [x for x in selected if x not in CHECKS]
    if unknown:
        raise ValidationError(
            f"unknown checks: {', '.join(unknown)}; known: {', '.join(sorted(CHECKS))}"
        )
    return sorted((CHECKS[name](seed) for name in selected), key=lambda r: r.name)


def suite_passed(reports) -> bool:
    """Exit criterion: every non-inverted check passed."""
    return all(r.passed for r in reports if not r.inverted)


# --------------------------------------------------------------------------
# witness re-evaluation
# --------------------------------------------------------------------------


def reevaluate_witness(report: BoundReport) -> float:
    """Recompute the quantity a report's witness claims, from scratch."""
    w = report.witness
    kind = w["kind"]
    if kind == "w_triple":
        fs = _functions_from_payload(w)
        dst = _dist_from_payload(w["dist"])
        gswf = Gswf(*fs)
        if w["method"] == "formula":
            return w_formula(gswf, dst).w
        return w_oracle(gswf, dst).w
    if kind == "cross_sum_triple":
        fs = _functions_from_payload(w)
        dst = _dist_from_payload(w["dist"])
        res = w_formula(Gswf(*fs), dst)
        return res.w - res.base
    if kind in ("scaled_biased_pair", "biased_pair", "bounded_pair"):
        n = w["n"]
        f = BooleanFunction.from_hex(n, w["f"])
        g = BooleanFunction.from_hex(n, w["g"])
        value = biased_inner_product(walsh_transform(f), walsh_transform(g), w["delta"])
        if kind == "scaled_biased_pair":
            return value / w["delta"]
        if kind == "bounded_pair":
            p1, p2 = bfn.expectation(f), bfn.expectation(g)
            return value + min(p1 * p2, (1 - p1) * (1 - p2))
        return value
    if kind == "covariance_pair":
        n = w["n"]
        f = BooleanFunction.from_hex(n, w["f"])
        g = BooleanFunction.from_hex(n, w["g"])
        efg = float(np.dot(f.table.astype(np.float64), g.table.astype(np.float64))) / (
            1 << n
        )
        cov = efg - bfn.expectation(f) * bfn.expectation(g)
        return cov if w["orientation"] == "increasing" else -cov
    if kind == "power_sum_point":
        x, y, z, k = w["x"], w["y"], w["z"], w["k"]
        e = 2 * k + 1
        return (x**3 + y**3 + z**3) - (x**e + y**e + z**e)
    if kind == "eq_floor_row":
        dst = _dist_from_payload(w["dist"])
        return w_formula(catalog.preset_gswf("condorcet", w["n"]), dst).w
    if kind == "stability_point":
        return abs(
            majority_self_correlation(w["n"], w["rho"])
            - math.asin(w["rho"]) / (2.0 * math.pi)
        )
    if kind == "dual_function":
        n = w["n"]
        f = BooleanFunction.from_hex(n, w["f"])
        signs = np.where(mask_levels(n) & 1, 1.0, -1.0)
        dev = np.abs(walsh_transform(bfn.dual(f)).coeffs - signs * walsh_transform(f).coeffs)
        dev[0] = 0.0
        return float(dev.max())
    if kind == "first_level_bound":
        return w_prime_first_level_bound(w["n"])
    if kind == "instability_ratio_pair":
        if w["from_n"] is None:
            return 0.0
        d = _uniform()

        def ratio(n):
            gswf = catalog.preset_gswf("threshold_instability", n, q=w["q"])
            return w_formula(gswf, d).w / catalog.eta(n, w["q"])

        return ratio(w["from_n"]) - ratio(w["to_n"])
    raise ValidationError(f"unknown witness kind {kind!r}")
