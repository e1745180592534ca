"""Exact sparse polynomials and rational expressions in the model variables.

A monomial is stored as the sorted tuple of the interned indices of its
variables, repeated according to multiplicity, so that multiplying two
monomials is a concatenate-and-sort.  Coefficients are Python integers and
therefore never overflow.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .graphs import MixedGraph, VariableId, bidirected_subdivision, omega_var, variable_from_name

_lock = threading.Lock()
_variables: List[VariableId] = []
_index: Dict[VariableId, int] = {}


def _intern(var: VariableId) -> int:
    idx = _index.get(var)
    if idx is None:
        with _lock:
            idx = _index.get(var)
            if idx is None:
                idx = len(_variables)
                _variables.append(var)
                _index[var] = idx
    return idx


def _var(idx: int) -> VariableId:
    return _variables[idx]


class Monomial(tuple):
    """Product of variables; behaves as an immutable sorted tuple of indices."""

    __slots__ = ()

    def __new__(cls, exponents: Union[Mapping[VariableId, int], Iterable[VariableId]] = ()):
        if isinstance(exponents, Mapping):
            items = []
            for var, e in exponents.items():
                if e < 0:
                    raise ValueError("negative exponent")
                items.extend([_intern(var)] * e)
        else:
            items = [_intern(v) for v in exponents]
        return super().__new__(cls, sorted(items))

    @classmethod
    def _from_key(cls, key: Tuple[int, ...]) -> "Monomial":
        return tuple.__new__(cls, key)

    @property
    def exponents(self) -> Dict[VariableId, int]:
        return {_var(i): e for i, e in Counter(self).items()}

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial._from_key(tuple(sorted(self + other)))

    def __repr__(self) -> str:
        return f"Monomial({_render_monomial(self) or '1'})"


def _ordered_powers(key: Tuple[int, ...]) -> List[Tuple[VariableId, int]]:
    return sorted(((_var(i), e) for i, e in Counter(key).items()), key=lambda ve: ve[0].sort_key)


def _render_monomial(key: Tuple[int, ...]) -> str:
    # omega block first, then lambda block, each by (i, j)
    powers = _ordered_powers(key)
    powers = [p for p in powers if p[0].kind == "omega"] + [p for p in powers if p[0].kind == "lambda"]
    return "*".join(v.name if e == 1 else f"{v.name}^{e}" for v, e in powers)


def _monomial_order(key: Tuple[int, ...]):
    # graded, then lexicographic in the canonical variable order
    return (len(key), [v.sort_key for v, e in _ordered_powers(key) for _ in range(e)])


class Polynomial:
    """Sparse polynomial with integer coefficients; immutable."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Tuple[int, ...], int]] = None):
        if terms is None:
            self._terms: Dict[Tuple[int, ...], int] = {}
        else:
            self._terms = {tuple(m): c for m, c in terms.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Tuple[int, ...], int]) -> "Polynomial":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: int) -> "Polynomial":
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, v: VariableId) -> "Polynomial":
        return cls._raw({(_intern(v),): 1})

    @classmethod
    def from_monomial(cls, m: Monomial, coefficient: int = 1) -> "Polynomial":
        return cls._raw({tuple(m): coefficient} if coefficient else {})

    # -- inspection --

    def terms(self) -> Dict[Monomial, int]:
        return {Monomial._from_key(m): c for m, c in self._terms.items()}

    def coefficient(self, m: Monomial) -> int:
        return self._terms.get(tuple(m), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, int]]:
        for m, c in self._terms.items():
            yield Monomial._from_key(m), c

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def constant_term(self) -> int:
        return self._terms.get((), 0)

    def variables(self) -> frozenset:
        return frozenset(_var(i) for m in self._terms for i in m)

    # -- arithmetic --

    def __add__(self, other) -> "Polynomial":
        other = _coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return _coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = _coerce(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Tuple[int, ...], int] = {}
        get = out.get
        for m2, c2 in b.items():
            if not m2:
                for m1, c1 in a.items():
                    out[m1] = get(m1, 0) + c1 * c2
                continue
            for m1, c1 in a.items():
                m = tuple(sorted(m1 + m2)) if m1 else m2
                out[m] = get(m, 0) + c1 * c2
        return Polynomial._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        result, base = Polynomial.constant(1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({canonical_string(self)!r})"

    # -- transformations --

    def map_monomials(self, fn: Callable[[Dict[VariableId, int]], Optional[Tuple[Dict[VariableId, int], int]]]) -> "Polynomial":
        """Rewrite monomial by monomial; ``fn`` returns ``(exponents, factor)``
        or ``None`` to drop the monomial."""
        out: Dict[Tuple[int, ...], int] = {}
        for m, c in self._terms.items():
            r = fn({_var(i): e for i, e in Counter(m).items()})
            if r is None:
                continue
            exps, factor = r
            key = tuple(Monomial(exps))
            out[key] = out.get(key, 0) + c * factor
        return Polynomial(out)

    def substitute(self, mapping: Mapping[VariableId, "Polynomial"]) -> "Polynomial":
        """Ring homomorphism sending each variable in ``mapping`` to a polynomial."""
        idx_map = {_intern(v): _coerce(p) for v, p in mapping.items()}
        result = Polynomial()
        power_cache: Dict[Tuple[int, int], Polynomial] = {}
        for m, c in self._terms.items():
            kept = []
            term = Polynomial.constant(c)
            for i, e in Counter(m).items():
                if i in idx_map:
                    p = power_cache.get((i, e))
                    if p is None:
                        p = power_cache[(i, e)] = idx_map[i] ** e
                    term = term * p
                else:
                    kept.extend([i] * e)
            if kept:
                term = term * Polynomial._raw({tuple(sorted(kept)): 1})
            result = result + term
        return result

    def truncate(self, max_degree: int, grading: Optional[Callable[[VariableId], int]] = None) -> "Polynomial":
        """Drop monomials whose weighted degree exceeds ``max_degree``.

        The default grading counts lambda variables only.
        """
        w = _grading_weights(grading)
        return Polynomial._raw({m: c for m, c in self._terms.items() if sum(w(i) for i in m) <= max_degree})

    def lambda_degree(self) -> int:
        w = _grading_weights(None)
        return max((sum(w(i) for i in m) for m in self._terms), default=0)

    # -- export --

    def to_records(self) -> List[list]:
        """Structured export: ``[coefficient, [[variable, exponent], ...]]``
        per term, in canonical order."""
        return [
            [c, [[v.name, e] for v, e in _ordered_powers(m)]]
            for m, c in sorted(self._terms.items(), key=lambda mc: _monomial_order(mc[0]))
        ]

    @classmethod
    def from_records(cls, records: Iterable[Sequence]) -> "Polynomial":
        out: Dict[Tuple[int, ...], int] = {}
        for c, powers in records:
            key = tuple(Monomial({variable_from_name(n): e for n, e in powers}))
            out[key] = out.get(key, 0) + c
        return Polynomial(out)


def _grading_weights(grading):
    if grading is None:
        return lambda i: 1 if _var(i).kind == "lambda" else 0
    return lambda i: grading(_var(i))


def _coerce(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, int):
        return Polynomial.constant(x)
    if isinstance(x, Monomial):
        return Polynomial.from_monomial(x)
    if isinstance(x, VariableId):
        return Polynomial.var(x)
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


ZERO = Polynomial()
ONE = Polynomial.constant(1)


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def poly_neg(p: Polynomial) -> Polynomial:
    return -p


def canonical_string(p: Polynomial) -> str:
    """Deterministic text form, e.g. ``1 - 2*l_1_2*l_2_1``."""
    if not p._terms:
        return "0"
    parts = []
    for m, c in sorted(p._terms.items(), key=lambda mc: _monomial_order(mc[0])):
        body = _render_monomial(m)
        mag = abs(c)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        if not parts:
            parts.append(text if c > 0 else "-" + text)
        else:
            parts.append(("+ " if c > 0 else "- ") + text)
    return " ".join(parts)


def monomial_string(m: Monomial) -> str:
    return _render_monomial(tuple(m)) or "1"


# -- rational expressions --------------------------------------------------


@dataclass(frozen=True)
class RationalExpr:
    """``numerator / denominator`` with no common-factor reduction."""

    numerator: Polynomial
    denominator: Polynomial = ONE

    def __post_init__(self):
        object.__setattr__(self, "numerator", _coerce(self.numerator))
        object.__setattr__(self, "denominator", _coerce(self.denominator))
        if self.denominator.is_zero():
            raise ZeroDivisionError("zero denominator")

    def __add__(self, other: "RationalExpr") -> "RationalExpr":
        other = _coerce_rational(other)
        if self.denominator == other.denominator:
            return RationalExpr(self.numerator + other.numerator, self.denominator)
        return RationalExpr(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    def __neg__(self) -> "RationalExpr":
        return RationalExpr(-self.numerator, self.denominator)

    def __sub__(self, other: "RationalExpr") -> "RationalExpr":
        return self + (-_coerce_rational(other))

    def __mul__(self, other: "RationalExpr") -> "RationalExpr":
        other = _coerce_rational(other)
        return RationalExpr(self.numerator * other.numerator, self.denominator * other.denominator)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def substitute(self, mapping: Mapping[VariableId, Polynomial]) -> "RationalExpr":
        return RationalExpr(self.numerator.substitute(mapping), self.denominator.substitute(mapping))

    def __repr__(self) -> str:
        return f"RationalExpr({canonical_string(self.numerator)!r}, {canonical_string(self.denominator)!r})"


def _coerce_rational(x) -> RationalExpr:
    if isinstance(x, RationalExpr):
        return x
    return RationalExpr(_coerce(x), ONE)


def rat_equal(a: RationalExpr, b: RationalExpr) -> bool:
    """Equality as rational functions, by cross-multiplication."""
    a, b = _coerce_rational(a), _coerce_rational(b)
    if a.denominator == b.denominator:
        return a.numerator == b.numerator
    return a.numerator * b.denominator == b.numerator * a.denominator


def series_expand(r: RationalExpr, max_degree: int) -> Polynomial:
    """Power series of ``r`` truncated at lambda-degree ``max_degree``.

    The denominator must be ``+-1`` plus terms of positive lambda-degree.
    """
    den = r.denominator
    c0 = den.constant_term()
    if c0 not in (1, -1):
        raise ValueError("denominator must have constant term +-1")
    rest = den - c0
    w = _grading_weights(None)
    if any(sum(w(i) for i in m) == 0 for m in rest._terms):
        raise ValueError("denominator has non-constant terms of lambda-degree 0")
    # 1/den = c0 * sum_r (-c0 * rest)^r
    q = rest * (-c0)
    inv, power = ONE, ONE
    for _ in range(max_degree):
        power = (power * q).truncate(max_degree)
        if power.is_zero():
            break
        inv = inv + power
    return (r.numerator.truncate(max_degree) * inv * c0).truncate(max_degree)


# -- bidirected subdivision ------------------------------------------------


def _subdivision_variables(g: MixedGraph):
    sub = bidirected_subdivision(g)
    allowed = {VariableId("lambda", i, j) for i, j in sub.edges}
    allowed |= {omega_var(v, v) for v in sub.vertices}
    return sub, allowed


class PullbackError(ValueError):
    pass


def _check_variables(p: Polynomial, allowed) -> None:
    bad = sorted((v for v in p.variables() if v not in allowed), key=lambda v: v.sort_key)
    if bad:
        raise PullbackError(f"variables not in the bidirected subdivision: {', '.join(v.name for v in bad)}")


def subdivision_pullback(p: Polynomial, g: MixedGraph) -> Polynomial:
    """Rewrite an expression on the bidirected subdivision of ``g`` into the
    variables of ``g`` by the four-step monomial rule:

    1. drop monomials containing ``lambda((i,j),i)^2`` or ``lambda((i,j),j)^2``;
    2. set the remaining ``lambda((i,j),i)``, ``lambda((i,j),j)`` to 1;
    3. rename ``omega((i,j),(i,j))`` to ``omega(i,j)``;
    4. keep every other variable under its own name.

    The rule loses every monomial of the true expansion in which some
    ``omega(i,j)``, ``i != j``, has exponent at least 2; use
    :func:`subdivision_pullback_exact` when such monomials can occur.
    """
    _, allowed = _subdivision_variables(g)
    _check_variables(p, allowed)

    def rewrite(exps):
        out = {}
        for v, e in exps.items():
            if v.kind == "lambda" and isinstance(v.i, tuple):
                if e >= 2:
                    return None
                continue
            if v.kind == "omega" and isinstance(v.i, tuple):
                out[omega_var(*v.i)] = out.get(omega_var(*v.i), 0) + e
                continue
            out[v] = out.get(v, 0) + e
        return out, 1

    return p.map_monomials(rewrite)


def subdivision_pullback_exact(p: Polynomial, g: MixedGraph) -> Polynomial:
    """Exact inverse of passing to the bidirected subdivision.

    Applies the substitution ``lambda((i,j),.) -> 1``,
    ``omega((i,j),(i,j)) -> omega(i,j)`` and
    ``omega(i,i) -> omega(i,i) - sum_{j: i<->j} omega(i,j)``.
    """
    sub, allowed = _subdivision_variables(g)
    _check_variables(p, allowed)
    return p.substitute(_pullback_mapping(g, sub))


def _pullback_mapping(g: MixedGraph, sub) -> Dict[VariableId, Polynomial]:
    mapping: Dict[VariableId, Polynomial] = {}
    for s in sub.vertices:
        if isinstance(s, tuple):
            i, j = s
            mapping[VariableId("lambda", s, i)] = ONE
            mapping[VariableId("lambda", s, j)] = ONE
            mapping[omega_var(s, s)] = Polynomial.var(omega_var(i, j))
    for v in g.vertices:
        partners = [j if i == v else i for i, j in g.bidirected_edges if v in (i, j)]
        if partners:
            p = Polynomial.var(omega_var(v, v))
            for u in partners:
                p = p - Polynomial.var(omega_var(v, u))
            mapping[omega_var(v, v)] = p
    return mapping


def rational_pullback_exact(r: RationalExpr, g: MixedGraph) -> RationalExpr:
    sub, allowed = _subdivision_variables(g)
    _check_variables(r.numerator, allowed)
    _check_variables(r.denominator, allowed)
    return r.substitute(_pullback_mapping(g, sub))
