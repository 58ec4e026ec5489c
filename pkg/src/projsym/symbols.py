"""Symbol spaces with polynomial coefficients and their basic operators.

A :class:`Symbol` models a finite sum of terms

    x^b  (tensor)  v_{w_1} ^ ... ^ v_{w_p}  (tensor)  xi^a

with exact rational coefficients: a polynomial function on the cotangent
space, polynomial of degree ``|a|`` in the fibre variable xi, valued in
antisymmetric contravariant p-tensors.  The xi-degree grading is
recoverable from the terms; the form degree p is fixed per value.

Operators implemented here: the degree-transfer differential
:func:`koszul_delta` and its dual :func:`koszul_delta_star`, the
divergence :func:`divergence`, the complementary projectors
:func:`project_ab`, and the geometric Lie derivative :func:`lie_symbol`.
"""

from __future__ import annotations

from fractions import Fraction

from .core import (
    DimensionError,
    GradeError,
    Poly,
    Rat,
    exp_add,
    exp_sub,
    interior_contract,
    rat,
    unit_exp,
    wedge_insert,
    zero_exp,
)

__all__ = [
    "Symbol",
    "VectorField",
    "koszul_delta",
    "koszul_delta_star",
    "divergence",
    "interior_eta",
    "project_ab",
    "lie_symbol",
]


def _acc(d: dict, key, c) -> None:
    v = d.get(key)
    if v is None:
        if c:
            d[key] = c
    else:
        v = v + c
        if v:
            d[key] = v
        else:
            del d[key]


class Symbol:
    """Exact linear combination of monomial symbol terms.

    ``terms`` maps ``(x_exps, word, xi_exps)`` to a nonzero rational.
    Mixed xi-degrees may coexist in one value; graded operations extract
    homogeneous components explicitly.  The zero symbol is shared across
    form degrees: adding it to anything is allowed, and all zero symbols
    compare equal.
    """

    __slots__ = ("n", "p", "terms")

    def __init__(self, n: int, p: int, terms=None):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"bad ambient dimension {n!r}")
        if not isinstance(p, int) or not 0 <= p <= n:
            raise ValueError(f"form degree {p!r} out of range 0..{n}")
        canon: dict = {}
        if terms:
            for (b, w, a), c in dict(terms).items():
                b, w, a = tuple(b), tuple(w), tuple(a)
                if len(b) != n or len(a) != n:
                    raise DimensionError(f"exponent vectors must have length {n}")
                if any(x < 0 for x in b) or any(x < 0 for x in a):
                    raise ValueError("negative exponent")
                if len(w) != p:
                    raise GradeError(f"word {w!r} has length {len(w)}, expected {p}")
                if any(not 1 <= i <= n for i in w) or any(
                    w[t] >= w[t + 1] for t in range(len(w) - 1)
                ):
                    raise ValueError(f"word {w!r} is not strictly increasing in 1..{n}")
                c = rat(c)
                if c:
                    _acc(canon, (b, w, a), c)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "terms", canon)

    @classmethod
    def _make(cls, n: int, p: int, terms: dict) -> "Symbol":
        self = object.__new__(cls)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "p", p if terms else max(0, min(p, n)))
        object.__setattr__(self, "terms", terms)
        return self

    def __setattr__(self, *_):
        raise AttributeError("Symbol is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int, p: int = 0) -> "Symbol":
        return cls._make(n, max(0, min(p, n)), {})

    @classmethod
    def monomial(cls, n: int, p: int, x_exps, word, xi_exps, coef=1) -> "Symbol":
        return cls(n, p, {(tuple(x_exps), tuple(word), tuple(xi_exps)): coef})

    # -- linear structure ----------------------------------------------------

    def _check_dim(self, other: "Symbol") -> None:
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "Symbol") -> "Symbol":
        self._check_dim(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        if self.p != other.p:
            raise GradeError(f"form degree mismatch: {self.p} vs {other.p}")
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return Symbol._make(self.n, self.p, out)

    def __neg__(self) -> "Symbol":
        return Symbol._make(self.n, self.p, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Symbol") -> "Symbol":
        return self + (-other)

    def scale(self, c) -> "Symbol":
        c = rat(c)
        if not c:
            return Symbol.zero(self.n, self.p)
        return Symbol._make(self.n, self.p, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    # -- grading -------------------------------------------------------------

    def xi_degrees(self) -> list[int]:
        """Sorted list of xi-degrees present."""
        return sorted({sum(a) for (_, _, a) in self.terms})

    def component(self, k: int) -> "Symbol":
        """The xi-homogeneous component of degree k."""
        out = {key: c for key, c in self.terms.items() if sum(key[2]) == k}
        return Symbol._make(self.n, self.p, out)

    def xi_degree(self):
        """Degree of a xi-homogeneous symbol; None when zero.

        Raises GradeError on mixed input.
        """
        degs = self.xi_degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise GradeError(f"symbol mixes xi-degrees {degs}")
        return degs[0]

    def x_degree(self):
        if not self.terms:
            return None
        return max(sum(b) for (b, _, _) in self.terms)

    # -- inspection ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Symbol):
            return NotImplemented
        if self.n != other.n:
            return False
        if not self.terms and not other.terms:
            return True
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.p if self.terms else -1,
                     frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"Symbol(n={self.n}, p={self.p}, {self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=lambda t: (sum(t[2]), t[2], t[1], t[0])):
            b, w, a = key
            c = self.terms[key]
            factors = []
            for i, k in enumerate(b):
                if k:
                    factors.append(f"x{i + 1}" + (f"^{k}" if k > 1 else ""))
            if w:
                factors.append("v" + "^".join(str(i) for i in w))
            for i, k in enumerate(a):
                if k:
                    factors.append(f"xi{i + 1}" + (f"^{k}" if k > 1 else ""))
            body = "*".join(factors) if factors else "1"
            parts.append(f"({c})*{body}")
        return " + ".join(parts)


class VectorField:
    """Vector field on R^n with polynomial components (1-based access)."""

    __slots__ = ("n", "comps")

    def __init__(self, comps):
        comps = tuple(comps)
        if not comps:
            raise ValueError("a vector field needs at least one component")
        n = comps[0].n
        if len(comps) != n:
            raise DimensionError(f"expected {n} components, got {len(comps)}")
        for c in comps:
            if not isinstance(c, Poly) or c.n != n:
                raise DimensionError("component dimensions disagree")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "comps", comps)

    def __setattr__(self, *_):
        raise AttributeError("VectorField is immutable")

    @classmethod
    def from_dict(cls, n: int, entries: dict) -> "VectorField":
        """Build from {direction i: Poly or {exps: coef}} entries."""
        comps = []
        for i in range(1, n + 1):
            v = entries.get(i)
            if v is None:
                comps.append(Poly.zero(n))
            elif isinstance(v, Poly):
                comps.append(v)
            else:
                comps.append(Poly(n, v))
        return cls(comps)

    def comp(self, i: int) -> Poly:
        return self.comps[i - 1]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def degree(self):
        degs = [c.degree() for c in self.comps if not c.is_zero()]
        return max(degs) if degs else None

    def derive(self, f: Poly) -> Poly:
        """Directional derivative sum_i X^i d f / d x_i."""
        if f.n != self.n:
            raise DimensionError("dimension mismatch")
        out = Poly.zero(self.n)
        for i in range(1, self.n + 1):
            Xi = self.comps[i - 1]
            if Xi.is_zero():
                continue
            df = f.partial(i)
            if not df.is_zero():
                out = out + Xi * df
        return out

    def bracket(self, other: "VectorField") -> "VectorField":
        """Lie bracket [X, Y] = (X.Y^k - Y.X^k) d_k."""
        if self.n != other.n:
            raise DimensionError("dimension mismatch")
        return VectorField(
            [self.derive(other.comps[k]) - other.derive(self.comps[k])
             for k in range(self.n)]
        )

    def jacobian(self) -> list[list[Poly]]:
        """Matrix of entries J[i-1][a-1] = d X^i / d x_a."""
        return [[self.comps[i].partial(a + 1) for a in range(self.n)]
                for i in range(self.n)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.n == other.n and self.comps == other.comps

    def __hash__(self):
        return hash((self.n, self.comps))

    def __repr__(self) -> str:
        parts = [f"({c})*d{i + 1}" for i, c in enumerate(self.comps)
                 if not c.is_zero()]
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Koszul-type operators
# ---------------------------------------------------------------------------

def koszul_delta(u: Symbol) -> Symbol:
    """Transfer one symmetric xi-slot into the exterior slot.

    Each term L (tensor) P becomes sum_j (v_j ^ L) (tensor) dP/dxi_j: the
    form degree rises by one and each xi-homogeneous component drops one
    degree.  On full words (p = n) the result is zero.
    """
    n, p = u.n, u.p
    if p >= n:
        return Symbol.zero(n, n)
    out: dict = {}
    for (b, w, a), c in u.terms.items():
        for j in range(1, n + 1):
            aj = a[j - 1]
            if not aj:
                continue
            res = wedge_insert(j, w, n)
            if res is None:
                continue
            sign, w2 = res
            _acc(out, (b, w2, exp_sub(a, unit_exp(n, j))), c * aj * sign)
    return Symbol._make(n, p + 1, out)


def koszul_delta_star(u: Symbol) -> Symbol:
    """Transfer one exterior slot into the symmetric xi-slot (dual map).

    Each term L (tensor) P becomes sum_j i_j(L) (tensor) xi_j P: the form
    degree drops by one and the xi-degree rises by one.  Zero on p = 0.
    """
    n, p = u.n, u.p
    if p == 0:
        return Symbol.zero(n, 0)
    out: dict = {}
    for (b, w, a), c in u.terms.items():
        for j in w:
            sign, w2 = interior_contract(j, w, n)
            _acc(out, (b, w2, exp_add(a, unit_exp(n, j))), c * sign)
    return Symbol._make(n, p - 1, out)


def divergence(u: Symbol) -> Symbol:
    """The contraction sum_j d/dx_j d/dxi_j, leaving the exterior slot alone."""
    n = u.n
    out: dict = {}
    for (b, w, a), c in u.terms.items():
        for j in range(n):
            bj, aj = b[j], a[j]
            if bj and aj:
                b2 = b[:j] + (bj - 1,) + b[j + 1:]
                a2 = a[:j] + (aj - 1,) + a[j + 1:]
                _acc(out, (b2, w, a2), c * bj * aj)
    return Symbol._make(n, u.p, out)


def interior_eta(u: Symbol) -> Symbol:
    """Contract the coefficient gradient into the exterior slot.

    Sends each term x^b L (tensor) P to sum_j d(x^b)/dx_j i_j(L) (tensor) P.
    This is the commutator of :func:`divergence` with
    :func:`koszul_delta_star`, which the tests verify.
    """
    n, p = u.n, u.p
    if p == 0:
        return Symbol.zero(n, 0)
    out: dict = {}
    for (b, w, a), c in u.terms.items():
        for j in w:
            bj = b[j - 1]
            if not bj:
                continue
            sign, w2 = interior_contract(j, w, n)
            b2 = exp_sub(b, unit_exp(n, j))
            _acc(out, (b2, w2, a), c * bj * sign)
    return Symbol._make(n, p - 1, out)


def project_ab(u: Symbol) -> tuple[Symbol, Symbol]:
    """Split a xi-homogeneous symbol into its two complementary parts.

    Returns ``(a_part, b_part)`` with a_part + b_part = u exactly, where
    a_part is the image-of-delta component and b_part the image-of-dual
    component; both are cut out by the quadratic projectors divided by
    k + p.  Raises GradeError on mixed input or at the degenerate grade
    k + p = 0.
    """
    if u.is_zero():
        return u, u
    k = u.xi_degree()
    denom = k + u.p
    if denom == 0:
        raise GradeError("projectors are undefined at xi-degree 0, form degree 0")
    a_part = koszul_delta(koszul_delta_star(u)).scale(Fraction(1, denom))
    b_part = koszul_delta_star(koszul_delta(u)).scale(Fraction(1, denom))
    return a_part, b_part


# ---------------------------------------------------------------------------
# geometric Lie derivative
# ---------------------------------------------------------------------------

def lie_symbol(X: VectorField, u: Symbol) -> Symbol:
    """Geometric Lie derivative of a symbol along a polynomial field.

    The transport term differentiates the x-coefficients along X; the
    Jacobian DX (entries dX^i/dx_a) then acts, with a minus sign, as a
    derivation on the contravariant fibre: wedge factors map by
    v_a -> sum_i (dX^i/dx_a) v_i and xi-variables by
    xi_a -> sum_i (dX^i/dx_a) xi_i.
    """
    n = u.n
    if X.n != n:
        raise DimensionError(f"dimension mismatch: field {X.n}, symbol {n}")
    out: dict = {}
    jac = X.jacobian()
    for (b, w, a), c in u.terms.items():
        # transport of coefficients
        for i in range(1, n + 1):
            bi = b[i - 1]
            if not bi:
                continue
            Xi = X.comp(i)
            if Xi.is_zero():
                continue
            b1 = exp_sub(b, unit_exp(n, i))
            for e, cx in Xi.terms.items():
                _acc(out, (exp_add(b1, e), w, a), c * bi * cx)
        # fibre action on wedge slots
        for t, slot in enumerate(w):
            s1 = -1 if t % 2 else 1
            w_minus = w[:t] + w[t + 1:]
            for i in range(1, n + 1):
                J = jac[i - 1][slot - 1]
                if J.is_zero():
                    continue
                res = wedge_insert(i, w_minus, n)
                if res is None:
                    continue
                s2, w2 = res
                for e, cj in J.terms.items():
                    _acc(out, (exp_add(b, e), w2, a), -c * s1 * s2 * cj)
        # fibre action on xi slots
        for aidx in range(1, n + 1):
            mult = a[aidx - 1]
            if not mult:
                continue
            a_minus = exp_sub(a, unit_exp(n, aidx))
            for i in range(1, n + 1):
                J = jac[i - 1][aidx - 1]
                if J.is_zero():
                    continue
                a2 = exp_add(a_minus, unit_exp(n, i))
                for e, cj in J.terms.items():
                    _acc(out, (exp_add(b, e), w, a2), -c * mult * cj)
    return Symbol._make(n, u.p, out)
