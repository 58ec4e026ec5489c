"""The projective algebra, its Killing-dual pairing, and Casimir operators.

The projective algebra on R^n is spanned by the constant fields, all
linear fields and the quadratic fields x^r E (E the Euler field); it is
isomorphic to sl(n+1).  The quadratic Casimir is assembled from paired
bases: the operator acts either through the geometric Lie derivative
(:func:`casimir_c`) or through the operator-action one
(:func:`casimir_quant`).  Closed forms for both the spectrum and the
difference of the two Casimirs are implemented for cross-checking.
"""

from __future__ import annotations

from fractions import Fraction

from .action import lie_symbolic
from .core import Poly, Rat
from .linalg import RatMatrix
from .symbols import (
    Symbol,
    VectorField,
    divergence,
    koszul_delta,
    koszul_delta_star,
    lie_symbol,
)

__all__ = [
    "projective_generators",
    "sl_matrix_basis",
    "killing_dual",
    "ProjectiveBasis",
    "get_projective_basis",
    "casimir_c",
    "casimir_quant",
    "casimir_closed_form",
    "n_casimir",
    "n_casimir_closed",
    "alpha_eigenvalue",
    "beta_eigenvalue",
    "spectrum_table",
]


def _field(n: int, entries: dict) -> VectorField:
    return VectorField.from_dict(n, entries)


def euler_field(n: int) -> VectorField:
    return VectorField([Poly.coordinate(n, i) for i in range(1, n + 1)])


def projective_generators(n: int) -> list[VectorField]:
    """The n^2 + 2n generators: constants, all linear fields, x^r E.

    Deterministic order: d_1..d_n, then x^s d_r (s outer, r inner), then
    the quadratic fields x^1 E .. x^n E.
    """
    if n < 2:
        raise ValueError("the construction needs ambient dimension >= 2")
    gens: list[VectorField] = []
    for r in range(1, n + 1):
        gens.append(_field(n, {r: Poly.const(n, 1)}))
    for s in range(1, n + 1):
        for r in range(1, n + 1):
            gens.append(_field(n, {r: Poly.coordinate(n, s)}))
    for r in range(1, n + 1):
        xr = Poly.coordinate(n, r)
        gens.append(VectorField([xr * Poly.coordinate(n, i)
                                 for i in range(1, n + 1)]))
    return gens


# ---------------------------------------------------------------------------
# traceless matrices and the Killing-dual basis
# ---------------------------------------------------------------------------

def sl_matrix_basis(n: int):
    """Standard basis of the traceless n x n matrices.

    Off-diagonal units E_ab (a != b) first, then the diagonal differences
    E_aa - E_(a+1)(a+1); entries are exact rationals.
    """
    mats = []
    for a in range(n):
        for b in range(n):
            if a != b:
                m = [[Rat(0)] * n for _ in range(n)]
                m[a][b] = Rat(1)
                mats.append(tuple(tuple(row) for row in m))
    for a in range(n - 1):
        m = [[Rat(0)] * n for _ in range(n)]
        m[a][a] = Rat(1)
        m[a + 1][a + 1] = Rat(-1)
        mats.append(tuple(tuple(row) for row in m))
    return mats


def _mat_trace_prod(A, B) -> Rat:
    n = len(A)
    return sum((A[i][j] * B[j][i] for i in range(n) for j in range(n)), Rat(0))


def killing_dual(mats, n: int):
    """Dual basis for the pairing 2n tr(AB), by exact Gram inversion.

    Raises when the input does not span (singular Gram matrix).
    """
    m = len(mats)
    gram = RatMatrix([[2 * n * _mat_trace_prod(mats[i], mats[j])
                       for j in range(m)] for i in range(m)])
    try:
        inv = gram.inverse()
    except ValueError as exc:
        raise ValueError("input matrices do not form a basis "
                         "(singular Gram matrix)") from exc
    duals = []
    for j in range(m):
        acc = [[Rat(0)] * n for _ in range(n)]
        for i in range(m):
            c = inv.rows[i][j]
            if c:
                for a in range(n):
                    for b in range(n):
                        acc[a][b] += c * mats[i][a][b]
        duals.append(tuple(tuple(row) for row in acc))
    return duals


def _h_field(n: int, A) -> VectorField:
    """Linear field attached to a matrix: components -sum_l A^k_l x^l."""
    comps = []
    for k in range(n):
        terms = {}
        for l in range(n):
            if A[k][l]:
                e = tuple(1 if t == l else 0 for t in range(n))
                terms[e] = -A[k][l]
        comps.append(Poly(n, terms))
    return VectorField(comps)


class ProjectiveBasis:
    """Paired bases of the projective algebra used by the Casimir.

    One basis: e_i (constants), the Euler field, h_A for A running over the
    traceless matrices, and eps^i = -(1/(2(n+1))) x^i E.  The dual list
    pairs positionally: eps^i, E/(2n), (n/(n+1)) h_{A*}, e_i, with A* the
    trace-pairing dual computed by Gram inversion.
    """

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("ambient dimension must be >= 2")
        self.n = n
        self.e = [_field(n, {i: Poly.const(n, 1)}) for i in range(1, n + 1)]
        self.euler = euler_field(n)
        coef = Fraction(-1, 2 * (n + 1))
        self.eps = []
        for i in range(1, n + 1):
            xi = Poly.coordinate(n, i).scale(coef)
            self.eps.append(VectorField([xi * Poly.coordinate(n, j)
                                         for j in range(1, n + 1)]))
        self.sl_basis = sl_matrix_basis(n)
        self.sl_dual = killing_dual(self.sl_basis, n)
        self.h = [_h_field(n, A) for A in self.sl_basis]
        self.h_dual = [_h_field(n, A) for A in self.sl_dual]
        acc = self.e[0].bracket(self.eps[0])
        for i in range(1, n):
            acc = VectorField([a + b for a, b in
                               zip(acc.comps, self.e[i].bracket(self.eps[i]).comps)])
        self.bracket_sum = acc

    def count(self) -> int:
        return 2 * len(self.e) + 1 + len(self.h)


_BASIS_CACHE: dict[int, ProjectiveBasis] = {}


def get_projective_basis(n: int) -> ProjectiveBasis:
    basis = _BASIS_CACHE.get(n)
    if basis is None:
        basis = ProjectiveBasis(n)
        _BASIS_CACHE[n] = basis
    return basis


# ---------------------------------------------------------------------------
# the two Casimir operators
# ---------------------------------------------------------------------------

def _casimir(u: Symbol, lie) -> Symbol:
    n = u.n
    basis = get_projective_basis(n)
    out = Symbol.zero(n, u.p)
    for i in range(n):
        out = out + lie(basis.eps[i], lie(basis.e[i], u)).scale(2)
    out = out + lie(basis.bracket_sum, u)
    out = out + lie(basis.euler, lie(basis.euler, u)).scale(Fraction(1, 2 * n))
    c = Fraction(n, n + 1)
    for A, Adual in zip(basis.h, basis.h_dual):
        out = out + lie(A, lie(Adual, u)).scale(c)
    return out


def casimir_c(u: Symbol) -> Symbol:
    """Quadratic Casimir through the geometric action; preserves xi-degree."""
    return _casimir(u, lie_symbol)


def casimir_quant(u: Symbol) -> Symbol:
    """Quadratic Casimir through the operator action; lower-triangular in
    xi-degree."""
    return _casimir(u, lie_symbolic)


def alpha_eigenvalue(n: int, k: int, p: int) -> Rat:
    return Fraction((k + n + 1) * (k + p), n + 1)


def beta_eigenvalue(n: int, k: int, p: int) -> Rat:
    return Fraction((k + n) * (k + p), n + 1)


def casimir_closed_form(u: Symbol) -> Symbol:
    """Closed form of the geometric Casimir on a xi-homogeneous symbol:

        (k+n+1)/(n+1) * delta delta*  +  (k+n)/(n+1) * delta* delta.
    """
    if u.is_zero():
        return u
    k = u.xi_degree()
    n = u.n
    a = koszul_delta(koszul_delta_star(u)).scale(Fraction(k + n + 1, n + 1))
    b = koszul_delta_star(koszul_delta(u)).scale(Fraction(k + n, n + 1))
    return a + b


def n_casimir(u: Symbol) -> Symbol:
    """Difference of the two Casimirs, by definition."""
    return casimir_quant(u) - casimir_c(u)


def n_casimir_closed(u: Symbol) -> Symbol:
    """Closed form of the Casimir difference:

        (1/(n+1)) (delta (div) delta*  +  delta* (div) delta),

    with div the divergence contraction; vanishes on xi-degree 0.
    """
    n = u.n
    a = koszul_delta(divergence(koszul_delta_star(u)))
    b = koszul_delta_star(divergence(koszul_delta(u)))
    return (a + b).scale(Fraction(1, n + 1))


def spectrum_table(n: int, max_k: int):
    """Rows (k, p, alpha, beta) over 0 <= k <= max_k, 0 <= p <= n."""
    rows = []
    for k in range(max_k + 1):
        for p in range(n + 1):
            rows.append((k, p, alpha_eigenvalue(n, k, p),
                         beta_eigenvalue(n, k, p)))
    return rows
