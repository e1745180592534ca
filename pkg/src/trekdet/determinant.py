"""Cancellation-free expansions of covariance subdeterminants.

Trek flows are grouped by monomial.  Every class contributes
``sign * 2^ud_count * monomial``, where the sign and the number of up-down
cycles are read off a single representative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple

from .flows import TrekFlow, _backward_path_systems, _forward_path_systems, iter_trek_flows, trek_flow_monomial, trek_flow_sign, up_down_cycles
from .graphs import CyclicGraphError, DiGraph, GraphLike, MixedGraph, Vertex, as_digraph, bidirected_subdivision, is_acyclic, variable_from_name
from .polynomial import (
    Monomial,
    Polynomial,
    RationalExpr,
    _monomial_order,
    canonical_string,
    rational_pullback_exact,
    subdivision_pullback,
    subdivision_pullback_exact,
)


@dataclass(frozen=True)
class ExpansionClass:
    monomial: Monomial
    sign: int
    ud_count: int

    @property
    def coefficient(self) -> int:
        return self.sign * 2**self.ud_count

    def to_record(self) -> dict:
        return {
            "sign": self.sign,
            "ud_count": self.ud_count,
            "monomial": [[v.name, e] for v, e in sorted(self.monomial.exponents.items(), key=lambda ve: ve[0].sort_key)],
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ExpansionClass":
        mono = Monomial({variable_from_name(n): e for n, e in rec["monomial"]})
        return cls(mono, int(rec["sign"]), int(rec["ud_count"]))


@dataclass(frozen=True)
class DetExpansion:
    """Signed, power-of-two weighted sum over monomial classes."""

    classes: Tuple[ExpansionClass, ...] = ()

    def __post_init__(self):
        monos = [c.monomial for c in self.classes]
        if len(set(monos)) != len(monos):
            raise ValueError("expansion classes must have distinct monomials")

    def to_polynomial(self) -> Polynomial:
        return Polynomial({tuple(c.monomial): c.coefficient for c in self.classes})

    def is_zero(self) -> bool:
        return not self.classes

    def canonical_string(self) -> str:
        return canonical_string(self.to_polynomial())

    def sorted_classes(self) -> List[ExpansionClass]:
        order = {tuple(m): n for n, (m, _) in enumerate(_canonical_terms(self.to_polynomial()))}
        return sorted(self.classes, key=lambda c: order[tuple(c.monomial)])

    def to_records(self) -> List[dict]:
        return [c.to_record() for c in self.sorted_classes()]

    @classmethod
    def from_records(cls, records: Iterable[dict]) -> "DetExpansion":
        return cls(tuple(ExpansionClass.from_record(r) for r in records))


def _canonical_terms(p: Polynomial):
    return sorted(p, key=lambda mc: _monomial_order(tuple(mc[0])))


CONSTANT_ONE = DetExpansion((ExpansionClass(Monomial(), 1, 0),))


def _digraph_for(g: GraphLike) -> DiGraph:
    if isinstance(g, MixedGraph) and g.bidirected_edges:
        return bidirected_subdivision(g)
    return as_digraph(g)


def _classify(flows: Iterable[TrekFlow], A, B) -> DetExpansion:
    reps: Dict[Tuple[int, ...], TrekFlow] = {}
    for t in flows:
        key = tuple(trek_flow_monomial(t))
        if key not in reps:
            reps[key] = t
    classes = []
    for key, t in reps.items():
        classes.append(ExpansionClass(Monomial._from_key(key), trek_flow_sign(t, A, B), len(up_down_cycles(t))))
    return DetExpansion(tuple(classes))


def det_rational(g: GraphLike, A: Sequence[Vertex], B: Sequence[Vertex]) -> Tuple[DetExpansion, DetExpansion]:
    """Numerator and denominator expansions of ``det Sigma_{A,B}``.

    ``g`` must be free of bidirected edges.  The numerator runs over trek flows
    from ``A`` to ``B``, the denominator over trek flows from the empty set to
    itself.
    """
    d = as_digraph(g)
    A, B = tuple(A), tuple(B)
    num = _classify(iter_trek_flows(d, A, B), A, B)
    den = _classify(iter_trek_flows(d, (), ()), (), ())
    return num, den


def det_acyclic(g: GraphLike, A: Sequence[Vertex], B: Sequence[Vertex]) -> DetExpansion:
    """Expansion of ``det Sigma_{A,B}`` for a graph with acyclic directed part.

    Bidirected edges are handled on the bidirected subdivision, so the
    returned classes are in the variables of that subdivision; use
    :func:`det_polynomial` for the expansion in the variables of ``g``.
    """
    d = _digraph_for(g)
    if not is_acyclic(d):
        raise CyclicGraphError("det_acyclic requires an acyclic directed part")
    num, den = det_rational(d, A, B)
    assert den == CONSTANT_ONE, "acyclic graph with a non-trivial denominator"
    return num


def det_polynomial(g: MixedGraph, A: Sequence[Vertex], B: Sequence[Vertex]) -> Polynomial:
    """``det Sigma_{A,B}`` as a polynomial in the variables of ``g`` (acyclic)."""
    p = det_acyclic(g, A, B).to_polynomial()
    if isinstance(g, MixedGraph) and g.bidirected_edges:
        return subdivision_pullback_exact(p, g)
    return p


def det_rational_expr(g: GraphLike, A: Sequence[Vertex], B: Sequence[Vertex]) -> RationalExpr:
    """``det Sigma_{A,B}`` as numerator over denominator in the variables of ``g``."""
    num, den = det_rational(_digraph_for(g), A, B)
    r = RationalExpr(num.to_polynomial(), den.to_polynomial())
    if isinstance(g, MixedGraph) and g.bidirected_edges:
        return rational_pullback_exact(r, g)
    return r


def det_pullback_four_step(g: MixedGraph, A: Sequence[Vertex], B: Sequence[Vertex]) -> Polynomial:
    """Acyclic expansion on the subdivision rewritten by the four-step rule."""
    return subdivision_pullback(det_acyclic(g, A, B).to_polynomial(), g)


def trek_separated(g: GraphLike, A: Sequence[Vertex], B: Sequence[Vertex]) -> bool:
    """True iff no self-avoiding trek flow from ``A`` to ``B`` exists.

    Searches top sets of path families into ``A`` and stops at the first one
    that also reaches ``B`` by vertex-disjoint paths.
    """
    d = _digraph_for(g)
    A, B = tuple(A), tuple(B)
    if len(A) != len(B):
        raise ValueError(f"|A| = {len(A)} differs from |B| = {len(B)}")
    for S in (A, B):
        for v in S:
            if v not in d.vertices:
                raise ValueError(f"vertex {v!r} not in graph")
    tried = set()
    for paths in _backward_path_systems(d, A):
        S = tuple(p[0] for p in paths)
        key = frozenset(S)
        if key in tried:
            continue
        tried.add(key)
        for _ in _forward_path_systems(d, S, B):
            return False
    return True


# -- verification -------------------------------------------------------------


@dataclass
class PositivityReport:
    classes_checked: int = 0
    flows_checked: int = 0
    violations: List[Monomial] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class PowerOfTwoViolation:
    monomial: Monomial
    class_size: int
    ud_counts: Tuple[int, ...]


@dataclass
class PowerOfTwoReport:
    classes_checked: int = 0
    flows_checked: int = 0
    violations: List[PowerOfTwoViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _group_by_monomial(g: GraphLike, A, B) -> Dict[Tuple[int, ...], List[TrekFlow]]:
    d = _digraph_for(g)
    groups: Dict[Tuple[int, ...], List[TrekFlow]] = {}
    for t in iter_trek_flows(d, A, B):
        groups.setdefault(tuple(trek_flow_monomial(t)), []).append(t)
    return groups


def verify_positivity(g: GraphLike, A: Sequence[Vertex], B: Sequence[Vertex]) -> PositivityReport:
    """Report monomial classes containing trek flows of both signs."""
    A, B = tuple(A), tuple(B)
    report = PositivityReport()
    for key, flows in _group_by_monomial(g, A, B).items():
        report.classes_checked += 1
        report.flows_checked += len(flows)
        if len({trek_flow_sign(t, A, B) for t in flows}) > 1:
            report.violations.append(Monomial._from_key(key))
    return report


def verify_power_of_two(g: GraphLike, A: Sequence[Vertex], B: Sequence[Vertex]) -> PowerOfTwoReport:
    """Report classes whose size differs from ``2^|UD|`` for some member."""
    A, B = tuple(A), tuple(B)
    report = PowerOfTwoReport()
    for key, flows in _group_by_monomial(g, A, B).items():
        report.classes_checked += 1
        report.flows_checked += len(flows)
        uds = tuple(len(up_down_cycles(t)) for t in flows)
        if any(len(flows) != 2**u for u in uds):
            report.violations.append(PowerOfTwoViolation(Monomial._from_key(key), len(flows), uds))
    return report


def result_record(g: GraphLike, A: Sequence[Vertex], B: Sequence[Vertex]) -> dict:
    """Structured determinant record used by the CLI and the determinism check."""
    d = _digraph_for(g)
    num, den = det_rational(d, A, B)
    rec = {
        "acyclic": is_acyclic(d),
        "is_zero": num.is_zero(),
        "numerator_classes": num.to_records(),
        "denominator_classes": den.to_records(),
    }
    if isinstance(g, MixedGraph) and g.bidirected_edges:
        r = rational_pullback_exact(RationalExpr(num.to_polynomial(), den.to_polynomial()), g)
        rec["subdivided"] = True
        rec["numerator"] = r.numerator.to_records()
        rec["denominator"] = r.denominator.to_records()
    else:
        rec["subdivided"] = False
        rec["numerator"] = num.to_polynomial().to_records()
        rec["denominator"] = den.to_polynomial().to_records()
    return rec
