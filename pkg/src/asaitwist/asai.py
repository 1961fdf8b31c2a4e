"""The norm map on conjugacy classes and the Asai twisting operator.

The norm map sends a class of g = x * F^m(x)^{-1} in G(F_{q^m}) to the
class of F^m(x)^{-1} * x = x^{-1} g x, computed here through the
triangular Lang solver; the twisting operator is its pullback acting on
class functions.  The operator is the identity exactly when the norm map
fixes every class, which is decided on the class permutation, never
through numeric comparison of functions.

For a class fixed by the norm map there is a centralizer witness: some
z in Z(g) at a finite level with z^{-1} F^m(z) = g.  Concretely, if
y in G(F_{q^m}) conjugates the norm image back to g, then z = (x*y)^{-1}
commutes with g and z^{-1} F^m(z) = x F^m(x)^{-1} = g.  Moved classes
admit no such witness, so witness existence and fixedness must agree
classwise on every run.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalInconsistencyError, ParameterError
from .lang import LangWitness, lang_solve_triangular
from .points import ClassTable, FiniteGroupView, Point


@dataclass
class NormMapResult:
    """The class permutation induced by the norm map, with witnesses.

    perm[c] is the class index of the norm image of class c's
    representative; witnesses hold the per-class Lang data and images the
    rational points N(rep) at level q^m.
    """

    table: ClassTable
    perm: tuple[int, ...]
    witnesses: list[LangWitness]
    images: list[Point]
    stats: dict

    @property
    def view(self) -> FiniteGroupView:
        return self.table.view


def norm_map(
    view: FiniteGroupView,
    table: ClassTable,
    max_degree: int | None = None,
) -> NormMapResult:
    """Per-class Lang solve; asserts rather than assumes well-definedness.

    Every computed image is checked to equal both x^{-1} g x and
    F^m(x)^{-1} x and to be fixed by F^m before it is located in the
    class table.
    """
    if table.view is not view:
        raise ParameterError("class table does not belong to this view")
    law, tower, ops = view.law, view.tower, view.ops
    q, m = view.q, view.m
    solves_before = tower.stats["artin_schreier_solves"]
    perm: list[int] = []
    witnesses: list[LangWitness] = []
    images: list[Point] = []
    max_deg_seen = view.field.degree
    for ci in range(len(table)):
        g = table.rep_point(ci)
        w = lang_solve_triangular(law, tower, g, q, m, max_degree=max_degree)
        x = w.x
        lvl = x.field
        max_deg_seen = max(max_deg_seen, lvl.degree)
        ge = ops.embed(g, lvl)
        img_conj = ops.mul(ops.mul(ops.inv(x), ge), x)
        img_norm = ops.mul(ops.inv(ops.frobenius(x, q, m)), x)
        if img_conj != img_norm:
            raise InternalInconsistencyError(
                "x^{-1} g x != F^m(x)^{-1} x despite x solving the Lang equation"
            )
        if ops.frobenius(img_norm, q, m) != img_norm:
            raise InternalInconsistencyError("norm image is not F^m-rational")
        img = ops.section(img_norm, view.field)
        perm.append(int(table.class_of[view.index_of(img)]))
        witnesses.append(w)
        images.append(img)
    if sorted(perm) != list(range(len(table))):
        raise InternalInconsistencyError("norm map did not permute the classes")
    stats = {
        "artin_schreier_solves": tower.stats["artin_schreier_solves"] - solves_before,
        "max_extension_degree": max_deg_seen,
        "classes": len(table),
    }
    return NormMapResult(table, tuple(perm), witnesses, images, stats)


def is_asai_trivial(result: NormMapResult) -> bool:
    """Delta functions separate classes, so the twisting operator is the
    identity on class functions iff the norm map fixes every class."""
    return all(result.perm[c] == c for c in range(len(result.perm)))


def moved_classes(result: NormMapResult) -> list[int]:
    return [c for c in range(len(result.perm)) if result.perm[c] != c]


def image_of_member(result: NormMapResult, ordinal: int) -> Point:
    """Norm image of an arbitrary group element, on demand.

    For h = w^{-1} g w with w rational, w^{-1} x w solves the Lang equation
    at h, so the image is the recorded class image conjugated by w.
    """
    view = result.view
    ci = int(result.table.class_of[ordinal])
    g_codes = view.codes[int(result.table.reps[ci])]
    w_ord = view.find_conjugator(g_codes, view.codes[ordinal])
    if w_ord is None:
        raise InternalInconsistencyError("ordinal is not in the class of its table")
    return view.ops.conj(view.point(w_ord), result.images[ci])


# ---------------------------------------------------------------------------
# class functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassFunction:
    """Exact rational values, one per conjugacy class."""

    table: ClassTable
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != len(self.table):
            raise ParameterError("value count != class count")


def delta_function(table: ClassTable, ci: int) -> ClassFunction:
    vals = [Fraction(0)] * len(table)
    vals[ci] = Fraction(1)
    return ClassFunction(table, tuple(vals))


def constant_function(table: ClassTable, value) -> ClassFunction:
    return ClassFunction(table, (Fraction(value),) * len(table))


def asai_apply(result: NormMapResult, f: ClassFunction) -> ClassFunction:
    """Pullback along the norm map: (Theta f)(c) = f(perm(c))."""
    if f.table is not result.table:
        raise ParameterError("class function lives on a different table")
    return ClassFunction(f.table, tuple(f.values[result.perm[c]] for c in range(len(f.table))))


def inner_product(f1: ClassFunction, f2: ClassFunction, view: FiniteGroupView) -> Fraction:
    """Sum over group elements of f1 * conj(f2): class values weighted by
    class size.  Conjugation is trivial on the exact rationals used here."""
    if f1.table is not f2.table:
        raise ParameterError("class functions live on different tables")
    if f1.table.view is not view:
        raise ParameterError("class functions do not belong to this view")
    sizes = f1.table.sizes
    return sum(
        (Fraction(sizes[c]) * f1.values[c] * f2.values[c] for c in range(len(f1.table))),
        Fraction(0),
    )


# ---------------------------------------------------------------------------
# twisted conjugacy
# ---------------------------------------------------------------------------


def twisted_classes(elements, mult, endo) -> list[list]:
    """Orbits of g ~ endo(h)^{-1} * g * h over all h.

    `elements` must be closed under mult and endo (closure failures
    raise); with endo the identity map this is ordinary conjugacy.  Sized
    for brute-force use on small groups.
    """
    elems = list(elements)
    index = {e: i for i, e in enumerate(elems)}
    if len(index) != len(elems):
        raise ParameterError("duplicate elements")

    def look(e, what):
        if e not in index:
            raise ParameterError(f"{what} leaves the element set: {e!r}")
        return e

    identity = None
    for e in elems:
        if mult(e, elems[0]) == elems[0]:
            identity = e
            break
    if identity is None or any(mult(identity, x) != x for x in elems):
        raise ParameterError("element set has no identity under mult")
    inv = {}
    for e in elems:
        for f in elems:
            if mult(e, f) == identity:
                inv[e] = f
                break
        else:
            raise ParameterError(f"{e!r} has no inverse: not a group")
    twisted = {h: look(endo(h), "endo") for h in elems}

    assigned: dict = {}
    classes: list[list] = []
    for g in elems:
        if g in assigned:
            continue
        orbit_ids = set()
        for h in elems:
            o = look(mult(mult(inv[twisted[h]], g), h), "mult")
            orbit_ids.add(index[o])
        members = [elems[i] for i in sorted(orbit_ids)]
        for e in members:
            assigned[e] = len(classes)
        classes.append(members)
    return classes


# ---------------------------------------------------------------------------
# centralizer witnesses for fixed classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CentralizerWitness:
    """z in Z(g) at level q^{m*n_multiplier} with z^{-1} F^m(z) = g."""

    g: Point
    z: Point
    n_multiplier: int
    in_centralizer: bool
    coboundary: bool


def centralizer_witness(result: NormMapResult, ci: int) -> CentralizerWitness | None:
    """Witness for a fixed class; None for a moved class.

    The y-search scans G(F_{q^m}) in canonical order and takes the first
    y with y^{-1} N(g) y = g (nonempty because the classes coincide); both
    witness checks are re-verified exactly and any failure is a bug, not a
    legitimate outcome.
    """
    if result.perm[ci] != ci:
        return None
    view = result.view
    ops = view.ops
    g = result.table.rep_point(ci)
    img = result.images[ci]
    y_ord = view.find_conjugator(view.point_codes(img), view.codes[int(result.table.reps[ci])])
    if y_ord is None:
        raise InternalInconsistencyError(
            "class is fixed but no rational y conjugates the norm image back"
        )
    y = view.point(y_ord)
    x = result.witnesses[ci].x
    lvl = x.field
    z = ops.inv(ops.mul(x, ops.embed(y, lvl)))
    ge = ops.embed(g, lvl)
    commutes = ops.mul(z, ge) == ops.mul(ge, z)
    coboundary = ops.mul(ops.inv(z), ops.frobenius(z, view.q, view.m)) == ge
    if not (commutes and coboundary):
        raise InternalInconsistencyError("centralizer witness failed its checks")
    return CentralizerWitness(
        g=g,
        z=z,
        n_multiplier=lvl.degree // view.field.degree,
        in_centralizer=commutes,
        coboundary=coboundary,
    )
