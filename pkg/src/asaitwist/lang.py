"""Solving the Lang equation x * F^m(x)^{-1} = g at finite levels.

For a triangular law the i-th coordinate of x * F^m(x)^{-1} is
t_i - t_i^{q^m} + (known expression in t_1..t_{i-1}), so each coordinate
is one Artin-Schreier equation t^{q^m} - t = c over the field generated
so far.  Every step extends the working field by a factor of at most p,
so the witness lives in degree at most p^d * m * n over F_p.

The brute-force solver scans whole groups level by level; it exists as an
independent oracle for the triangular one and is exponential in the
extension degree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, InternalInconsistencyError, ParameterError
from .fields import FieldElement, FieldTower, p_power_exponent
from .grouplaw import GroupLaw, all_tuples, eval_inv, eval_mul, point_frobenius
from .points import DEFAULT_MAX_ORDER, LawOps, Point, digits_point, point_digits

_BRUTE_CHUNK = 1 << 15


@dataclass(frozen=True)
class LangWitness:
    """x with x * F^m(x)^{-1} = g; x lives at level q^{m*n_multiplier}."""

    g: Point
    x: Point
    n_multiplier: int
    q: int
    m: int


def default_degree_cap(law: GroupLaw, q: int, m: int) -> int:
    """Default extension cap: triangular solving extends at most p-fold
    per coordinate, so p^dim times the base degree n*m suffices."""
    n = p_power_exponent(q, law.p)
    return law.p**law.dim * m * n


def lang_solve_triangular(
    law: GroupLaw,
    tower: FieldTower,
    g: Point,
    q: int,
    m: int,
    max_degree: int | None = None,
) -> LangWitness:
    """Coordinate-by-coordinate Artin-Schreier reduction.

    Deterministic: each coordinate takes the code-least solution at the
    least feasible level, so the witness is unique and reproducible.
    """
    if not law.triangular:
        raise ParameterError("triangular solver requires a triangular law")
    n = p_power_exponent(q, law.p)
    base = n * m
    if g.field.degree != base:
        raise ParameterError("g must be given at level F_{q^m}")
    if max_degree is None:
        max_degree = default_degree_cap(law, q, m)
    tower.make_field(base)
    cur = g.field
    ts: list[FieldElement] = []
    for i in range(law.dim):
        # partial point (t_1..t_i, 0, ..., 0); later coordinates of the
        # product do not feed back into coordinate i for triangular laws
        xt = np.zeros((law.dim, cur.degree), dtype=np.int64)
        for j, t in enumerate(ts):
            xt[j] = t.coeffs
        fx = point_frobenius(tower, cur, xt, base)
        y = eval_inv(law, tower, cur, fx)
        z = eval_mul(law, tower, cur, xt, y)
        gi = tower.vembed(g.field, cur, np.array(g.coords[i].coeffs, dtype=np.int64))
        c = FieldElement(cur, tuple(int(v) for v in (z[i] - gi) % law.p))
        t = tower.artin_schreier_solve(c, q, m, max_degree=max_degree)
        if t.field.degree > cur.degree:
            big = t.field
            ts = [tower.embed(e, big) for e in ts]
            cur = big
        elif t.field.degree < cur.degree:
            t = tower.embed(t, cur)
        ts.append(t)
    x = Point(tuple(ts))
    w = LangWitness(g, x, cur.degree // base, q, m)
    if not verify_witness(law, tower, w):
        raise InternalInconsistencyError("triangular Lang witness failed to verify")
    return w


def lang_solve_bruteforce(
    law: GroupLaw,
    tower: FieldTower,
    g: Point,
    q: int,
    m: int,
    n_cap: int = 8,
    max_order: int = DEFAULT_MAX_ORDER,
) -> LangWitness | None:
    """Scan G(F_{q^{mN}}) for N = 1, 2, ... <= n_cap; independent oracle.

    Returns the canonically least witness at the least feasible N, or None
    when the cap is reached (inconclusive, never a proof of nonexistence).
    """
    n = p_power_exponent(q, law.p)
    base = n * m
    for N in range(1, n_cap + 1):
        order = (q ** (m * N)) ** law.dim
        if order > max_order:
            return None
        try:
            fid = tower.make_field(base * N)
        except CapExceeded:
            return None
        gd = np.stack(
            [tower.vembed(g.field, fid, np.array(c.coeffs, dtype=np.int64)) for c in g.coords]
        )
        for start in range(0, order, _BRUTE_CHUNK):
            codes = np.arange(start, min(start + _BRUTE_CHUNK, order), dtype=np.int64)
            xs = all_tuples(tower, fid, law.dim, codes)
            fx = point_frobenius(tower, fid, xs, base)
            lang = eval_mul(law, tower, fid, xs, eval_inv(law, tower, fid, fx))
            mask = np.all(lang == gd[None], axis=(-2, -1))
            hits = np.nonzero(mask)[0]
            if hits.size:
                x = digits_point(fid, xs[int(hits[0])])
                return LangWitness(g, x, N, q, m)
    return None


def verify_witness(law: GroupLaw, tower: FieldTower, w: LangWitness) -> bool:
    """Re-evaluate x * F^m(x)^{-1} and compare with g at a common level."""
    try:
        ops = LawOps(law, tower)
        n = p_power_exponent(w.q, law.p)
        xd = point_digits(w.x)
        fid = w.x.field
        fx = point_frobenius(tower, fid, xd, n * w.m)
        lang = eval_mul(law, tower, fid, xd, eval_inv(law, tower, fid, fx))
        ge = point_digits(ops.embed(w.g, fid))
        return bool(np.array_equal(lang, ge))
    except Exception:
        return False
