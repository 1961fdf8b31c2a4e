"""Exact arithmetic in a compatible tower of finite fields F_{p^k}.

An element of F_{p^k} is a length-k coefficient vector over F_p in the
power basis of a fixed monic irreducible defining polynomial.  All
choices are deterministic:

* the defining polynomial of degree k is the monic irreducible whose
  coefficient vector (c_0, ..., c_{k-1}) minimises the integer code
  sum(c_i * p^i);
* an embedding F_{p^a} -> F_{p^b} sends the degree-a generator to the
  least root (same code order) of the degree-a defining polynomial that
  is compatible with every embedding already present in the tower, so
  that for a | b | c the composite a -> b -> c always equals a -> c;
* the Artin-Schreier solver t^{q^m} - t = c returns the code-least
  solution in the smallest field of the chain F_{q^m s}, F_{q^m s p}, ...
  containing one.

Bulk operations act on numpy int64 "digit" arrays of shape (..., k) with
entry i the coefficient of t^i.  Scalar and bulk paths share the same
kernels.  Towers are append-only: per-degree data is immutable once
built, so concurrent reads are safe; construction itself is not
synchronised.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import (
    CapExceeded,
    IncompatibleFields,
    InternalInconsistencyError,
    ParameterError,
)
from .modp import coset_min, kernel_rref, matpow_mod, rref_mod

DEFAULT_DEGREE_CAP = 1024

# fields with at most this many elements are searched by brute force when
# locating embedding roots; larger ones go through trace splitting
_BRUTE_ROOT_BOUND = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def p_power_exponent(q: int, p: int) -> int:
    """n such that q = p^n, or raise ParameterError."""
    if q < p:
        raise ParameterError(f"{q} is not a power of {p}")
    n = 0
    while q > 1:
        if q % p:
            raise ParameterError(f"{q} is not a power of {p}")
        q //= p
        n += 1
    return n


@dataclass(frozen=True, order=True)
class FieldId:
    """The field F_{p^degree} inside a tower with prime p."""

    p: int
    degree: int

    @property
    def order(self) -> int:
        return self.p ** self.degree


@dataclass(frozen=True)
class FieldElement:
    """Coefficient vector in the power basis of field's defining polynomial."""

    field: FieldId
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.field.degree:
            raise ParameterError("coefficient vector length != field degree")
        if any(c < 0 or c >= self.field.p for c in self.coeffs):
            raise ParameterError("coefficients must lie in [0, p)")

    @property
    def code(self) -> int:
        """Integer key defining the canonical order on field elements."""
        c = 0
        for d in reversed(self.coeffs):
            c = c * self.field.p + d
        return c

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self):
        return f"F({self.field.p}^{self.field.degree})[{','.join(map(str, self.coeffs))}]"


# -- polynomial helpers over F_p (1-D int64 coefficient arrays, c[i] ~ t^i) --


def _fp_trim(u: np.ndarray) -> np.ndarray:
    nz = np.nonzero(u)[0]
    return u[: int(nz[-1]) + 1] if nz.size else u[:1] * 0


def _fp_mod(u: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    u = u.copy() % p
    dv = len(v) - 1
    inv_lead = pow(int(v[-1]), -1, p)
    for j in range(len(u) - 1, dv - 1, -1):
        c = (u[j] * inv_lead) % p
        if c:
            u[j - dv : j + 1] = (u[j - dv : j + 1] - c * v) % p
    return _fp_trim(u[:dv] if dv else u[:1] * 0)


def _fp_gcd(u: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    u, v = _fp_trim(u % p), _fp_trim(v % p)
    while np.any(v):
        u, v = v, _fp_mod(u, v, p)
    return u


class _Level:
    """Immutable per-degree data: modulus, reduction matrix, Frobenius powers."""

    def __init__(self, p: int, degree: int, modulus: np.ndarray):
        self.p = p
        self.degree = degree
        self.modulus = modulus  # (degree+1,) monic over F_p
        self.red = _reduction_matrix(modulus, p)  # (degree-1, degree)
        # frob[e] is the matrix of x -> x^{p^e}: digit row vectors act on the right
        self._frob: dict[int, np.ndarray] = {0: np.eye(degree, dtype=np.int64)}
        self._frob[1] = _frobenius_matrix(modulus, self.red, p)
        # Artin-Schreier factorizations keyed by the exponent E with Q = p^E
        self.as_cache: dict[int, tuple] = {}

    def frob(self, e: int) -> np.ndarray:
        e = e % self.degree if self.degree > 1 else 0
        if e not in self._frob:
            self._frob[e] = matpow_mod(self._frob[1], e, self.p)
        return self._frob[e]


def _reduction_matrix(modulus: np.ndarray, p: int) -> np.ndarray:
    """Rows j = digit vector of t^{k+j} mod modulus, for j < k-1."""
    k = len(modulus) - 1
    red = np.zeros((max(k - 1, 0), k), dtype=np.int64)
    if k <= 1:
        return red
    cur = (-modulus[:k]) % p
    red[0] = cur
    for j in range(1, k - 1):
        top = cur[k - 1]
        cur = np.concatenate([[0], cur[: k - 1]])
        cur = (cur + top * red[0]) % p
        red[j] = cur
    return red


def _mulmod_fp(a: np.ndarray, b: np.ndarray, red: np.ndarray, p: int) -> np.ndarray:
    k = len(a)
    conv = np.convolve(a, b)
    if k == 1:
        return conv % p
    return (conv[:k] + conv[k:] @ red) % p


def _frobenius_matrix(modulus: np.ndarray, red: np.ndarray, p: int) -> np.ndarray:
    """Matrix with row i = digits of (t^i)^p mod modulus."""
    k = len(modulus) - 1
    mat = np.zeros((k, k), dtype=np.int64)
    mat[0, 0] = 1
    if k == 1:
        return mat
    # t^p mod f by binary powering
    tp = np.zeros(k, dtype=np.int64)
    if p < k:
        tp[p] = 1
    else:
        t = np.zeros(k, dtype=np.int64)
        t[1] = 1
        acc = np.zeros(k, dtype=np.int64)
        acc[0] = 1
        e = p
        base = t
        while e:
            if e & 1:
                acc = _mulmod_fp(acc, base, red, p)
            base = _mulmod_fp(base, base, red, p)
            e >>= 1
        tp = acc
    row = np.zeros(k, dtype=np.int64)
    row[0] = 1
    for i in range(1, k):
        row = _mulmod_fp(row, tp, red, p)
        mat[i] = row
    return mat


@dataclass
class _Embedding:
    src_degree: int
    dst_degree: int
    mat: np.ndarray  # (a, kb): row i = digits of (image of generator)^i
    sec: np.ndarray  # (kb, a): y @ sec recovers source digits for y in image
    chk: np.ndarray  # (kb, kb-a): y @ chk == 0 iff y lies in the image


class FieldTower:
    """All fields F_{p^k} for one prime p, with compatible embeddings.

    Construction is idempotent and append-only; every operation is a pure
    function of its inputs once the relevant levels exist.
    """

    def __init__(self, p: int, degree_cap: int = DEFAULT_DEGREE_CAP):
        if not is_prime(p):
            raise ParameterError(f"characteristic {p} is not prime")
        self.p = p
        self.degree_cap = degree_cap
        self._levels: dict[int, _Level] = {}
        self._emb: dict[tuple[int, int], _Embedding] = {}
        self.stats = {"fields_built": 0, "artin_schreier_solves": 0}
        self.make_field(1)

    # ---- field construction ----

    def make_field(self, degree: int) -> FieldId:
        if degree < 1:
            raise ParameterError("degree must be >= 1")
        if degree > self.degree_cap:
            raise CapExceeded(
                f"degree {degree} exceeds the tower cap {self.degree_cap}"
            )
        if degree not in self._levels:
            modulus = self._least_irreducible(degree)
            self._levels[degree] = _Level(self.p, degree, modulus)
            self.stats["fields_built"] += 1
        return FieldId(self.p, degree)

    def modulus(self, fid: FieldId) -> tuple[int, ...]:
        return tuple(int(c) for c in self._level(fid.degree).modulus)

    def _level(self, degree: int) -> _Level:
        if degree not in self._levels:
            self.make_field(degree)
        return self._levels[degree]

    def _least_irreducible(self, k: int) -> np.ndarray:
        p = self.p
        if k == 1:
            return np.array([0, 1], dtype=np.int64)  # t itself: F_p[t]/(t)
        weights = p ** np.arange(k, dtype=np.int64)
        xs = np.arange(p, dtype=np.int64)
        for j in range(p**k):
            low = (j // weights) % p
            if low[0] == 0:
                continue  # t divides
            coeffs = np.concatenate([low, [1]])
            vals = np.zeros(p, dtype=np.int64)
            for c in coeffs[::-1]:
                vals = (vals * xs + int(c)) % p
            if np.any(vals == 0):
                continue  # linear factor
            if self._is_irreducible(coeffs):
                return coeffs
        raise InternalInconsistencyError(f"no irreducible of degree {k} found")

    def _is_irreducible(self, coeffs: np.ndarray) -> bool:
        p = self.p
        k = len(coeffs) - 1
        red = _reduction_matrix(coeffs, p)
        frob = _frobenius_matrix(coeffs, red, p)
        if not np.array_equal(matpow_mod(frob, k, p), np.eye(k, dtype=np.int64)):
            return False  # t^{p^k} != t mod f
        t_vec = np.zeros(k, dtype=np.int64)
        t_vec[1] = 1
        for ell in prime_divisors(k):
            u = matpow_mod(frob, k // ell, p)[1]  # t^{p^{k/ell}} mod f
            g = _fp_gcd((u - t_vec) % p, coeffs, p)
            if len(_fp_trim(g)) != 1:
                return False
        return True

    # ---- scalar element API ----

    def element(self, fid: FieldId, coeffs) -> FieldElement:
        self.make_field(fid.degree)
        return FieldElement(fid, tuple(int(c) % self.p for c in coeffs))

    def zero(self, fid: FieldId) -> FieldElement:
        return self.element(fid, [0] * fid.degree)

    def one(self, fid: FieldId) -> FieldElement:
        return self.from_int(fid, 1)

    def from_int(self, fid: FieldId, c: int) -> FieldElement:
        coeffs = [0] * fid.degree
        coeffs[0] = c % self.p
        return self.element(fid, coeffs)

    def element_from_code(self, fid: FieldId, code: int) -> FieldElement:
        coeffs = []
        for _ in range(fid.degree):
            coeffs.append(code % self.p)
            code //= self.p
        return self.element(fid, coeffs)

    def elements(self, fid: FieldId) -> Iterator[FieldElement]:
        for code in range(fid.order):
            yield self.element_from_code(fid, code)

    def _dig(self, x: FieldElement) -> np.ndarray:
        return np.array(x.coeffs, dtype=np.int64)

    def _el(self, fid: FieldId, digits: np.ndarray) -> FieldElement:
        return FieldElement(fid, tuple(int(v) for v in digits))

    def add(self, x: FieldElement, y: FieldElement) -> FieldElement:
        self._same_field(x, y)
        return self._el(x.field, (self._dig(x) + self._dig(y)) % self.p)

    def sub(self, x: FieldElement, y: FieldElement) -> FieldElement:
        self._same_field(x, y)
        return self._el(x.field, (self._dig(x) - self._dig(y)) % self.p)

    def neg(self, x: FieldElement) -> FieldElement:
        return self._el(x.field, (-self._dig(x)) % self.p)

    def mul(self, x: FieldElement, y: FieldElement) -> FieldElement:
        self._same_field(x, y)
        return self._el(x.field, self.vmul(x.field, self._dig(x), self._dig(y)))

    def power(self, x: FieldElement, e: int) -> FieldElement:
        if e < 0:
            return self.power(self.invert(x), -e)
        return self._el(x.field, self.vpow(x.field, self._dig(x), e))

    def invert(self, x: FieldElement) -> FieldElement:
        if x.is_zero():
            raise ParameterError("zero has no inverse")
        return self.power(x, x.field.order - 2)

    def _same_field(self, x: FieldElement, y: FieldElement):
        if x.field != y.field:
            raise IncompatibleFields(f"{x.field} vs {y.field}")

    # ---- bulk digit-array kernels ----

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a + b) % self.p

    def vmul(self, fid: FieldId, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        k = fid.degree
        lvl = self._level(k)
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.ndim == 1 and b.ndim == 1:
            conv = np.convolve(a, b)
        else:
            shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
            conv = np.zeros(shape + (2 * k - 1,), dtype=np.int64)
            for i in range(k):
                conv[..., i : i + k] += a[..., i : i + 1] * b
        if k == 1:
            return conv % self.p
        return (conv[..., :k] + conv[..., k:] @ lvl.red) % self.p

    def vpow(self, fid: FieldId, a: np.ndarray, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 1:
            return a % self.p
        if e == 0:
            out = np.zeros_like(a)
            out[..., 0] = 1
            return out
        out = None
        base = a % self.p
        while e:
            if e & 1:
                out = base if out is None else self.vmul(fid, out, base)
            e >>= 1
            if e:
                base = self.vmul(fid, base, base)
        return out

    def vfrob(self, fid: FieldId, a: np.ndarray, e: int) -> np.ndarray:
        """x -> x^{p^e} applied to every digit row."""
        return (np.asarray(a, dtype=np.int64) @ self._level(fid.degree).frob(e)) % self.p

    def vfixed_by(self, fid: FieldId, a: np.ndarray, sub_degree: int) -> np.ndarray:
        """Boolean mask: which rows lie in F_{p^sub_degree}."""
        return np.all(self.vfrob(fid, a, sub_degree) == a, axis=-1)

    def codes_to_digits(self, fid: FieldId, codes: np.ndarray) -> np.ndarray:
        weights = self.p ** np.arange(fid.degree, dtype=np.int64)
        return (np.asarray(codes, dtype=np.int64)[..., None] // weights) % self.p

    def digits_to_codes(self, fid: FieldId, digits: np.ndarray) -> np.ndarray:
        if fid.degree * np.log2(self.p) > 62:
            raise CapExceeded("field too large for int64 element codes")
        weights = self.p ** np.arange(fid.degree, dtype=np.int64)
        return np.asarray(digits, dtype=np.int64) @ weights

    # ---- embeddings ----

    def embed(self, x: FieldElement, target: FieldId) -> FieldElement:
        if x.field == target:
            return x
        emb = self._embedding(x.field.degree, target.degree)
        return self._el(target, (self._dig(x) @ emb.mat) % self.p)

    def vembed(self, src: FieldId, dst: FieldId, a: np.ndarray) -> np.ndarray:
        if src == dst:
            return np.asarray(a, dtype=np.int64)
        emb = self._embedding(src.degree, dst.degree)
        return (np.asarray(a, dtype=np.int64) @ emb.mat) % self.p

    def section(self, y: FieldElement, target: FieldId) -> FieldElement:
        """Inverse image of y under embed(target -> y.field)."""
        return self._el(target, self.vsection(y.field, target, self._dig(y)))

    def vsection(self, src: FieldId, dst: FieldId, a: np.ndarray) -> np.ndarray:
        """Pull digit rows at level src down to level dst (dst.degree | src.degree)."""
        if src == dst:
            return np.asarray(a, dtype=np.int64)
        emb = self._embedding(dst.degree, src.degree)
        a = np.asarray(a, dtype=np.int64)
        if np.any((a @ emb.chk) % self.p):
            raise IncompatibleFields(
                f"element not in the image of F_{self.p}^{dst.degree}"
            )
        return (a @ emb.sec) % self.p

    def min_subfield_degree(self, x: FieldElement, step: int) -> int:
        """Least d = step * s with s | degree/step such that x in F_{p^d}."""
        deg = x.field.degree
        if deg % step:
            raise ParameterError("degree not a multiple of the base step")
        dig = self._dig(x)
        for s in divisors(deg // step):
            if bool(self.vfixed_by(x.field, dig, step * s)):
                return step * s
        raise InternalInconsistencyError("element not fixed by its own field degree")

    def _embedding(self, a: int, b: int) -> _Embedding:
        """Embedding F_{p^a} -> F_{p^b}, compatible with everything built.

        The stored lattice is kept transitively closed: adding the edge
        (a, b) also registers the compositions through it, so two requests
        reachable by different paths always agree.  A new edge takes the
        code-least root of the degree-a modulus among those commuting with
        every stored embedding it connects to.
        """
        key = (a, b)
        if key in self._emb:
            return self._emb[key]
        if b % a:
            raise IncompatibleFields(f"degree {a} does not divide {b}")
        self.make_field(a)
        self.make_field(b)
        if a == b:
            eye = np.eye(a, dtype=np.int64)
            emb = _Embedding(a, b, eye, eye, np.zeros((a, 0), dtype=np.int64))
            self._emb[key] = emb
            return emb
        fid_b = FieldId(self.p, b)
        if a == 1:
            mat = np.zeros((1, b), dtype=np.int64)
            mat[0, 0] = 1  # the unique embedding of the prime field
            candidates = [mat]
        else:
            candidates = [
                self._powers_matrix(fid_b, r, a)
                for r in self._root_candidates(a, b)
            ]
        pre = sorted(x for (x, t) in self._emb if t == a and x != a)
        post = sorted(y for (s, y) in self._emb if s == b and y != b)
        constraints = [
            (x, y)
            for x in [a] + pre
            for y in [b] + post
            if (x, y) != (a, b) and (x, y) in self._emb
        ]
        for mat in candidates:
            if all(self._path_commutes(x, a, mat, b, y) for x, y in constraints):
                self._register_edge(a, b, mat, pre, post)
                return self._emb[key]
        raise InternalInconsistencyError(
            f"no root of the degree-{a} modulus in F_{self.p}^{b} is compatible "
            "with the existing embedding lattice"
        )

    def _path_commutes(self, x: int, a: int, mat_ab: np.ndarray, b: int, y: int) -> bool:
        """Does x -> a -> b -> y through mat_ab equal the stored x -> y?"""
        if x == 1:
            return True  # prime-field embeddings all agree
        gen_in_a = (
            self._emb[(x, a)].mat[1]
            if x != a
            else np.eye(a, dtype=np.int64)[1]
        )
        img = (gen_in_a @ mat_ab) % self.p
        if y != b:
            img = (img @ self._emb[(b, y)].mat) % self.p
        return np.array_equal(img, self._emb[(x, y)].mat[1])

    def _register_edge(self, a: int, b: int, mat: np.ndarray, pre, post):
        """Store (a, b) and every new composition through it."""
        self._emb[(a, b)] = self._finish_embedding(a, b, mat)
        for x in [a] + pre:
            for y in [b] + post:
                if x == a and y == b:
                    continue
                if (x, y) in self._emb:
                    continue
                m = mat
                if x != a:
                    m = (self._emb[(x, a)].mat @ m) % self.p
                if y != b:
                    m = (m @ self._emb[(b, y)].mat) % self.p
                self._emb[(x, y)] = self._finish_embedding(x, y, m)

    def _root_candidates(self, a: int, b: int) -> list[np.ndarray]:
        """All roots of the degree-a modulus in F_{p^b} (one Frobenius
        orbit), in canonical code order."""
        fid_b = FieldId(self.p, b)
        r0 = self._subfield_root(a, b)
        conj = []
        r = r0
        for _ in range(a):
            conj.append(r)
            r = self.vfrob(fid_b, r, 1)
        keys = [self._scalar_code(v) for v in conj]
        order = sorted(range(a), key=keys.__getitem__)
        return [conj[i] for i in order]

    def _scalar_code(self, digits: np.ndarray) -> int:
        c = 0
        for d in reversed([int(v) for v in digits]):
            c = c * self.p + d
        return c

    def _powers_matrix(self, fid: FieldId, r: np.ndarray, a: int) -> np.ndarray:
        mat = np.zeros((a, fid.degree), dtype=np.int64)
        mat[0, 0] = 1
        row = mat[0]
        for i in range(1, a):
            row = self.vmul(fid, row, r)
            mat[i] = row
        return mat

    def _finish_embedding(self, a: int, b: int, mat: np.ndarray) -> _Embedding:
        r, t, pivots = rref_mod(mat.T, self.p)
        if len(pivots) != a:
            raise InternalInconsistencyError("embedding matrix is not injective")
        sec = t[:a].T % self.p
        chk = t[a:].T % self.p
        return _Embedding(a, b, mat, sec, chk)

    def _eval_fp_poly(self, fid: FieldId, coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Evaluate a polynomial with F_p coefficients at a digit vector."""
        acc = np.zeros(fid.degree, dtype=np.int64)
        for c in coeffs[::-1]:
            acc = self.vmul(fid, acc, x)
            acc[0] = (acc[0] + int(c)) % self.p
        return acc

    # ---- roots of a defining polynomial in a bigger field ----

    def _subfield_root(self, a: int, b: int) -> np.ndarray:
        fid_b = FieldId(self.p, b)
        fa = self._levels[a].modulus
        if self.p**b <= _BRUTE_ROOT_BOUND:
            codes = np.arange(self.p**b, dtype=np.int64)
            xs = self.codes_to_digits(fid_b, codes)
            acc = np.zeros_like(xs)
            for c in fa[::-1]:
                acc = self.vmul(fid_b, acc, xs)
                acc[..., 0] = (acc[..., 0] + int(c)) % self.p
            hits = np.nonzero(~np.any(acc, axis=-1))[0]
            if hits.size == 0:
                raise InternalInconsistencyError("modulus has no root in the overfield")
            return xs[int(hits[0])]
        h = np.zeros((a + 1, b), dtype=np.int64)
        h[:, 0] = fa
        return self._split_root(fid_b, h)

    def _split_root(self, fid: FieldId, h: np.ndarray) -> np.ndarray:
        """Deterministic root of a monic split squarefree polynomial over fid.

        Splits by the F_p-trace of w*T for basis elements w until a linear
        factor remains.
        """
        p, b = self.p, fid.degree
        h = self._pp_trim(h)
        while h.shape[0] - 1 > 1:
            deg = h.shape[0] - 1
            progressed = False
            for widx in range(b):
                u = np.zeros((2, b), dtype=np.int64)
                u[1, widx] = 1  # w * T
                u = self._pp_mod(fid, u, h)
                s = np.zeros((deg, b), dtype=np.int64)
                s[: u.shape[0]] += u
                for _ in range(b - 1):
                    u = self._pp_powp(fid, u, h)
                    s[: u.shape[0]] = (s[: u.shape[0]] + u) % p
                for c in range(p):
                    sc = s.copy()
                    sc[0, 0] = (sc[0, 0] - c) % p
                    g = self._pp_gcd(fid, h, sc)
                    dg = g.shape[0] - 1
                    if 0 < dg < deg:
                        h = g if dg <= deg - dg else self._pp_divexact(fid, h, g)
                        progressed = True
                        break
                if progressed:
                    break
            if not progressed:
                raise InternalInconsistencyError("trace splitting failed to progress")
        return (-h[0]) % p

    # polynomial helpers over a level: coefficient arrays of shape (deg+1, k)

    def _pp_trim(self, u: np.ndarray) -> np.ndarray:
        n = u.shape[0]
        while n > 1 and not np.any(u[n - 1]):
            n -= 1
        return u[:n]

    def _pp_mod(self, fid: FieldId, u: np.ndarray, h: np.ndarray) -> np.ndarray:
        """u mod h for monic h."""
        u = u.copy() % self.p
        d = h.shape[0] - 1
        for j in range(u.shape[0] - 1, d - 1, -1):
            cj = u[j]
            if np.any(cj):
                u[j - d : j + 1] = (u[j - d : j + 1] - self.vmul(fid, cj[None, :], h)) % self.p
        return self._pp_trim(u[:d] if d else u[:1] * 0)

    def _pp_divexact(self, fid: FieldId, u: np.ndarray, h: np.ndarray) -> np.ndarray:
        """u // h for monic u, h with h | u."""
        u = u.copy() % self.p
        d = h.shape[0] - 1
        qdeg = u.shape[0] - 1 - d
        q = np.zeros((qdeg + 1, fid.degree), dtype=np.int64)
        for j in range(u.shape[0] - 1, d - 1, -1):
            cj = u[j].copy()
            q[j - d] = cj
            if np.any(cj):
                u[j - d : j + 1] = (u[j - d : j + 1] - self.vmul(fid, cj[None, :], h)) % self.p
        if np.any(u[:d]):
            raise InternalInconsistencyError("division was not exact")
        return q

    def _pp_monic(self, fid: FieldId, u: np.ndarray) -> np.ndarray:
        u = self._pp_trim(u % self.p)
        lead = u[-1]
        one = np.zeros(fid.degree, dtype=np.int64)
        one[0] = 1
        if np.array_equal(lead, one):
            return u
        inv = self.vpow(fid, lead, fid.order - 2)
        return self.vmul(fid, u, inv[None, :])

    def _pp_gcd(self, fid: FieldId, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        u = self._pp_trim(u % self.p)
        v = self._pp_trim(v % self.p)
        while np.any(v):
            v = self._pp_monic(fid, v)
            u, v = v, self._pp_mod(fid, u, v)
        return u

    def _pp_powp(self, fid: FieldId, u: np.ndarray, h: np.ndarray) -> np.ndarray:
        """u^p mod h via the additivity of the p-power map in char p."""
        du = u.shape[0] - 1
        out = np.zeros((du * self.p + 1, fid.degree), dtype=np.int64)
        out[:: self.p] = self.vfrob(fid, u, 1)
        return self._pp_mod(fid, out, h)

    # ---- Frobenius, trace, Artin-Schreier ----

    def frobenius(self, x: FieldElement, q: int) -> FieldElement:
        """x^q for q a power of the tower characteristic."""
        n = p_power_exponent(q, self.p)
        return self._el(x.field, self.vfrob(x.field, self._dig(x), n))

    def trace_to(self, x: FieldElement, sub: FieldId) -> FieldElement:
        """Relative trace sum of x^{(p^sub.degree)^i} down to the subfield."""
        if x.field.degree % sub.degree:
            raise IncompatibleFields(
                f"{sub.degree} does not divide {x.field.degree}"
            )
        r = x.field.degree // sub.degree
        dig = self._dig(x)
        acc = np.zeros_like(dig)
        cur = dig
        for _ in range(r):
            acc = (acc + cur) % self.p
            cur = self.vfrob(x.field, cur, sub.degree)
        return self.section(self._el(x.field, acc), sub)

    def artin_schreier_solve(
        self,
        c: FieldElement,
        q: int,
        m: int,
        max_degree: int | None = None,
    ) -> FieldElement:
        """Code-least t with t^{q^m} - t = c.

        c must lie in an extension of F_{q^m}; it is first shrunk to the
        smallest field of the chain F_{(q^m)^s} containing it, so the answer
        does not depend on the level at which c happens to be represented.
        The solution lives either there or in the single p-fold extension
        where the relative trace obstruction vanishes.
        """
        n = p_power_exponent(q, self.p)
        e = n * m
        if c.field.degree % e:
            raise ParameterError("c does not lie in an extension of F_{q^m}")
        self.stats["artin_schreier_solves"] += 1
        base = self.min_subfield_degree(c, e)
        if base != c.field.degree:
            c = self.section(c, self.make_field(base))
        sol = self._as_try(base, e, self._dig(c))
        if sol is not None:
            return self._el(FieldId(self.p, base), sol)
        bigger = base * self.p
        cap = self.degree_cap if max_degree is None else min(max_degree, self.degree_cap)
        if bigger > cap:
            raise CapExceeded(
                f"Artin-Schreier solution needs degree {bigger} > cap {cap}"
            )
        big = self.make_field(bigger)
        cc = self.embed(c, big)
        sol = self._as_try(bigger, e, self._dig(cc))
        if sol is None:
            raise InternalInconsistencyError(
                "Artin-Schreier equation unsolvable in the p-fold extension"
            )
        return self._el(big, sol)

    def _as_try(self, degree: int, e: int, c_digits: np.ndarray) -> np.ndarray | None:
        """Solve x^{p^e} - x = c inside F_{p^degree}, least solution or None."""
        lvl = self._level(degree)
        if e not in lvl.as_cache:
            a = (lvl.frob(e) - np.eye(degree, dtype=np.int64)) % self.p
            # column-vector system with digit k-1 most significant
            brev = a.T[:, ::-1]
            _, t, pivots = rref_mod(brev, self.p)
            kern = kernel_rref(brev, self.p)
            lvl.as_cache[e] = (t, pivots, kern)
        t, pivots, kern = lvl.as_cache[e]
        tb = (t @ c_digits) % self.p
        rank = len(pivots)
        if np.any(tb[rank:]):
            return None
        y = np.zeros(degree, dtype=np.int64)
        for j, col in enumerate(pivots):
            y[col] = tb[j]
        y = coset_min(y, kern, self.p)
        return y[::-1]
