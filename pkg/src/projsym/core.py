"""Exact scalar, multi-index, polynomial and signed exterior-word kernel.

All coefficients are arbitrary-precision rationals (``fractions.Fraction``,
aliased ``Rat``); every operation is exact, and every value is immutable
after construction.  The ambient dimension ``n`` travels with each value:
mixing dimensions raises :class:`DimensionError` instead of broadcasting.

Conventions used by the whole package:

* coordinate directions, wedge-word entries and partial derivatives are
  1-based (``1..n``);
* exponent vectors ("multi-indices") are length-``n`` tuples of
  nonnegative ints;
* exterior words are strictly increasing tuples of directions, kept in a
  sorted-with-sign normal form by :func:`wedge_insert` and
  :func:`interior_contract`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

Rat = Fraction

__all__ = [
    "Rat",
    "rat",
    "DimensionError",
    "GradeError",
    "zero_exp",
    "unit_exp",
    "exp_add",
    "exp_sub",
    "exp_degree",
    "exps_of_degree",
    "exps_up_to_degree",
    "sub_exps",
    "exp_binom",
    "exp_factorial",
    "falling_power",
    "check_index",
    "wedge_insert",
    "interior_contract",
    "words_of_length",
    "Poly",
]


class DimensionError(ValueError):
    """Operands live over different ambient dimensions."""


class GradeError(ValueError):
    """A graded operation was applied at an unsupported or mixed grade."""


def rat(x) -> Rat:
    """Coerce an int, Fraction or ``num/den`` string to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


# ---------------------------------------------------------------------------
# multi-indices
# ---------------------------------------------------------------------------

def zero_exp(n: int) -> tuple[int, ...]:
    return (0,) * n


def unit_exp(n: int, i: int) -> tuple[int, ...]:
    """The i-th basis multi-index e_i (1-based i)."""
    check_index(i, n)
    return tuple(1 if j == i - 1 else 0 for j in range(n))


def exp_add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def exp_sub(a: tuple[int, ...], b: tuple[int, ...]):
    """Componentwise difference, or None if any entry would go negative."""
    out = []
    for x, y in zip(a, b):
        if y > x:
            return None
        out.append(x - y)
    return tuple(out)


def exp_degree(a: tuple[int, ...]) -> int:
    return sum(a)


@lru_cache(maxsize=None)
def exps_of_degree(n: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All multi-indices of length n with total degree exactly ``degree``."""
    if degree < 0:
        return ()
    if n == 1:
        return ((degree,),)
    out = []
    for head in range(degree, -1, -1):
        for rest in exps_of_degree(n - 1, degree - head):
            out.append((head,) + rest)
    return tuple(out)


def exps_up_to_degree(n: int, max_degree: int) -> tuple[tuple[int, ...], ...]:
    out: list[tuple[int, ...]] = []
    for d in range(max_degree + 1):
        out.extend(exps_of_degree(n, d))
    return tuple(out)


@lru_cache(maxsize=None)
def sub_exps(alpha: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """All nu with 0 <= nu <= alpha componentwise."""
    if not alpha:
        return ((),)
    rest = sub_exps(alpha[1:])
    return tuple((h,) + t for h in range(alpha[0] + 1) for t in rest)


def exp_binom(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """Product of componentwise binomial coefficients C(a_i, b_i)."""
    out = 1
    for x, y in zip(a, b):
        out *= comb(x, y)
    return out


def exp_factorial(a: tuple[int, ...]) -> int:
    out = 1
    for x in a:
        out *= factorial(x)
    return out


def falling_power(a: tuple[int, ...], g: tuple[int, ...]) -> int:
    """Coefficient of the g-fold derivative of x^a, i.e. prod a_i!/(a_i-g_i)!.

    Returns 0 when the derivative annihilates the monomial.
    """
    out = 1
    for x, y in zip(a, g):
        if y > x:
            return 0
        for t in range(y):
            out *= x - t
    return out


# ---------------------------------------------------------------------------
# signed exterior words
# ---------------------------------------------------------------------------

def check_index(i: int, n: int) -> None:
    if not isinstance(i, int) or not 1 <= i <= n:
        raise ValueError(f"index {i!r} out of range 1..{n}")


def wedge_insert(i: int, word: tuple[int, ...], n: int):
    """Insert direction i into a sorted word, tracking the permutation sign.

    Returns ``(sign, new_word)`` with the sign of prepending i and bubbling
    it into sorted position, or None when i already occurs (the wedge
    annihilates).
    """
    check_index(i, n)
    if i in word:
        return None
    below = 0
    for a in word:
        if a < i:
            below += 1
    sign = -1 if below % 2 else 1
    return sign, tuple(sorted(word + (i,)))


def interior_contract(j: int, word: tuple[int, ...], n: int):
    """Contract direction j out of a sorted word.

    Returns ``(sign, new_word)`` with sign (-1)**(t-1) when j is the t-th
    entry, or None when j does not occur.
    """
    check_index(j, n)
    if j not in word:
        return None
    t = word.index(j)
    sign = -1 if t % 2 else 1
    return sign, word[:t] + word[t + 1:]


@lru_cache(maxsize=None)
def words_of_length(n: int, p: int) -> tuple[tuple[int, ...], ...]:
    """All strictly increasing words of length p over 1..n."""
    if p < 0 or p > n:
        return ()
    from itertools import combinations

    return tuple(combinations(range(1, n + 1), p))


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Poly:
    """Multivariate polynomial over Q in canonical sparse form.

    Terms map exponent tuples to nonzero rationals; zero coefficients are
    never stored, so equality of canonical forms is dict equality.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"ambient dimension must be a positive int, got {n!r}")
        canon: dict[tuple[int, ...], Rat] = {}
        if terms:
            for e, c in dict(terms).items():
                e = tuple(e)
                if len(e) != n or any((not isinstance(x, int)) or x < 0 for x in e):
                    raise ValueError(f"bad exponent vector {e!r} for dimension {n}")
                c = rat(c)
                if c:
                    canon[e] = canon.get(e, Rat(0)) + c
                    if not canon[e]:
                        del canon[e]
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", canon)

    @classmethod
    def _make(cls, n: int, terms: dict) -> "Poly":
        # internal fast path: terms must already be canonical
        self = object.__new__(cls)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", terms)
        return self

    def __setattr__(self, *_):
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls._make(n, {})

    @classmethod
    def const(cls, n: int, c) -> "Poly":
        c = rat(c)
        return cls._make(n, {zero_exp(n): c} if c else {})

    @classmethod
    def coordinate(cls, n: int, i: int) -> "Poly":
        """The coordinate function x^i (1-based)."""
        return cls._make(n, {unit_exp(n, i): Rat(1)})

    @classmethod
    def monomial(cls, n: int, exps, coef=1) -> "Poly":
        return cls(n, {tuple(exps): coef})

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly._make(self.n, out)

    def __neg__(self) -> "Poly":
        return Poly._make(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out: dict[tuple[int, ...], Rat] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = exp_add(e1, e2)
                v = out.get(e)
                if v is None:
                    out[e] = c1 * c2
                else:
                    v = v + c1 * c2
                    if v:
                        out[e] = v
                    else:
                        del out[e]
        return Poly._make(self.n, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = rat(c)
        if not c:
            return Poly.zero(self.n)
        return Poly._make(self.n, {e: c * v for e, v in self.terms.items()})

    # -- calculus ----------------------------------------------------------

    def partial(self, i: int) -> "Poly":
        """Exact partial derivative in direction i (1-based)."""
        check_index(i, self.n)
        out = {}
        k = i - 1
        for e, c in self.terms.items():
            if e[k]:
                e2 = e[:k] + (e[k] - 1,) + e[k + 1:]
                out[e2] = c * e[k]
        return Poly._make(self.n, out)

    def deriv(self, gamma: tuple[int, ...]) -> "Poly":
        """Iterated derivative by the multi-index gamma."""
        out = {}
        for e, c in self.terms.items():
            f = falling_power(e, gamma)
            if f:
                out[exp_sub(e, gamma)] = c * f
        return Poly._make(self.n, out)

    def taylor(self, gamma: tuple[int, ...]) -> "Poly":
        """Taylor coefficient operator: deriv(gamma) / gamma!."""
        fact = exp_factorial(gamma)
        out = {}
        for e, c in self.terms.items():
            f = falling_power(e, gamma)
            if f:
                out[exp_sub(e, gamma)] = c * Fraction(f, fact)
        return Poly._make(self.n, out)

    def eval(self, point) -> Rat:
        """Evaluate at a rational point (sequence of length n)."""
        pt = [rat(x) for x in point]
        if len(pt) != self.n:
            raise DimensionError(f"point of length {len(pt)} for dimension {self.n}")
        total = Rat(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x ** k
            total += v
        return total

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self):
        """Total degree, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            # convenient exact comparison against 0 and other int constants
            return self == Poly.const(self.n, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"Poly({self.n}, {self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda t: (sum(t), t), reverse=True):
            c = self.terms[e]
            factors = [f"x{i + 1}" + (f"^{k}" if k > 1 else "")
                       for i, k in enumerate(e) if k]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out
