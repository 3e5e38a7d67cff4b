"""Singular fibers of isotrivial j=1728 elliptic K3 surfaces y^2 = x^3 + a(s) x
and the Gram matrix of their fiber components and sections."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import UniPoly, rational_roots, squarefree_decompose
from .curves import INFINITY, place_degree, place_str
from .errors import DomainError, NonMinimalModel, NotK3

K3_DEGREE = 8

# ord(a) -> (Kodaira type, Euler number, root lattice, component count)
_FIBER_TABLE = {
    1: ("III", 3, "A1", 2),
    2: ("I0*", 6, "D4", 5),
    3: ("III*", 9, "E7", 8),
}

# Components of each fiber type: intersection edges and multiplicities.
# C0 is the component met by the zero section.
_FIBER_GRAPHS = {
    "III": {"edges": {(0, 1): 2}, "mult": [1, 1]},
    "I0*": {"edges": {(0, 2): 1, (1, 2): 1, (2, 3): 1, (2, 4): 1}, "mult": [1, 1, 2, 1, 1]},
    "III*": {
        "edges": {(0, 1): 1, (1, 2): 1, (2, 3): 1, (3, 4): 1, (4, 5): 1, (5, 6): 1, (3, 7): 1},
        "mult": [1, 2, 3, 4, 3, 2, 1, 2],
    },
}


@dataclass(frozen=True)
class WeierstrassJ1728:
    """y^2 = x^3 + a(t,s) x with a dehomogenized to the affine coordinate s."""

    a: UniPoly
    declared_degree: int = K3_DEGREE

    def order_at_infinity(self) -> int:
        return self.declared_degree - self.a.degree

    def swap_zero_infinity(self) -> "WeierstrassJ1728":
        """Apply s -> 1/s: the coefficient list of s^d a(1/s) is reversed."""
        coeffs = list(self.a.coeffs) + [Fraction(0)] * (self.declared_degree - self.a.degree)
        return WeierstrassJ1728(UniPoly(coeffs[::-1]), self.declared_degree)


@dataclass(frozen=True)
class FiberDatum:
    place: object
    ord_a: int
    kodaira_type: str
    euler_number: int
    root_lattice: str
    component_count: int

    @property
    def degree(self) -> int:
        return place_degree(self.place)

    def to_json(self, var: str = "s") -> dict:
        return {
            "place": place_str(self.place, var),
            "degree": self.degree,
            "ordA": self.ord_a,
            "type": self.kodaira_type,
            "euler": self.euler_number,
            "root": self.root_lattice,
            "components": self.component_count,
        }


@dataclass(frozen=True)
class FibrationReport:
    fibers: tuple
    euler_total: int
    trivial_lattice_rank: int

    def fiber_types(self) -> list[str]:
        """Kodaira types with each place repeated by its degree."""
        return [f.kodaira_type for f in self.fibers for _ in range(f.degree)]

    def expanded_fibers(self) -> list[FiberDatum]:
        return [f for f in self.fibers for _ in range(f.degree)]

    def to_json(self, var: str = "s") -> dict:
        return {
            "fibers": [f.to_json(var) for f in self.fibers],
            "fiberTypes": self.fiber_types(),
            "eulerTotal": self.euler_total,
            "trivialRank": self.trivial_lattice_rank,
        }


def _fiber(place, order: int) -> FiberDatum:
    if order >= 4:
        where = place_str(place, "s")
        raise NonMinimalModel(f"a vanishes to order {order} at {where}; the model is not minimal")
    kind, euler, root, comps = _FIBER_TABLE[order]
    return FiberDatum(place, order, kind, euler, root, comps)


def _place_key(place):
    if place is INFINITY:
        return (2, ())
    if place.degree == 1:
        return (0, (-place.coeffs[0],))
    return (1, (place.degree,) + tuple(place.coeffs))


def classify_fibers(w: WeierstrassJ1728) -> FibrationReport:
    if w.declared_degree != K3_DEGREE:
        raise NotK3(f"declared degree {w.declared_degree} is not {K3_DEGREE}")
    if w.a.is_zero():
        raise DomainError("a(t,s) must be nonzero")
    if w.a.degree > w.declared_degree:
        raise NotK3(f"deg a = {w.a.degree} exceeds the declared degree {w.declared_degree}")
    fibers = []
    for factor, mult in squarefree_decompose(w.a):
        if factor.degree == 0:
            continue
        rest = factor
        for root in rational_roots(factor):
            lin = UniPoly([-root, 1])
            fibers.append(_fiber(lin, mult))
            rest = rest.exact_div(lin)
        if rest.degree > 0:
            fibers.append(_fiber(rest.monic(), mult))
    ord_inf = w.order_at_infinity()
    if ord_inf > 0:
        fibers.append(_fiber(INFINITY, ord_inf))
    fibers.sort(key=lambda f: _place_key(f.place))
    euler = sum(f.degree * f.euler_number for f in fibers)
    trivial = 2 + sum(f.degree * (f.component_count - 1) for f in fibers)
    if euler != 24:
        raise DomainError(f"Euler numbers sum to {euler}, not 24")
    return FibrationReport(tuple(fibers), euler, trivial)


@dataclass
class SectionIncidence:
    """A section: the component it meets in each (expanded) fiber, its
    intersection with the zero section, and with the other listed sections."""

    components: list
    meets_zero: int = 0
    pairings: dict = field(default_factory=dict)


def fiber_intersection_matrix(kodaira_type: str) -> list[list[int]]:
    graph = _FIBER_GRAPHS[kodaira_type]
    n = len(graph["mult"])
    m = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
    for (i, j), v in graph["edges"].items():
        m[i][j] = m[j][i] = v
    return m


def simple_components(kodaira_type: str) -> list[int]:
    return [i for i, k in enumerate(_FIBER_GRAPHS[kodaira_type]["mult"]) if k == 1]


def ns_generator_gram(report: FibrationReport, sections=()) -> list[list[int]]:
    """Gram matrix of O, F, non-identity fiber components and the sections
    (possibly degenerate when torsion sections are present)."""
    fibers = report.expanded_fibers()
    labels = [("O",), ("F",)]
    for fi, f in enumerate(fibers):
        for c in range(1, f.component_count):
            labels.append(("C", fi, c))
    for si in range(len(sections)):
        labels.append(("S", si))
    for si, sec in enumerate(sections):
        if len(sec.components) != len(fibers):
            raise DomainError(f"section {si} lists {len(sec.components)} components for {len(fibers)} fibers")
        for fi, (f, comp) in enumerate(zip(fibers, sec.components)):
            if comp not in simple_components(f.kodaira_type):
                raise DomainError(
                    f"section {si} meets component C{comp} of a {f.kodaira_type} fiber, "
                    "which is not a simple component"
                )
    mats = [fiber_intersection_matrix(f.kodaira_type) for f in fibers]

    def pair(x, y):
        kx, ky = x[0], y[0]
        if kx > ky:
            x, y, kx, ky = y, x, ky, kx
        if (kx, ky) == ("O", "O"):
            return -2
        if (kx, ky) == ("F", "O"):
            return 1
        if (kx, ky) == ("F", "F"):
            return 0
        if kx == "C" and ky == "C":
            return mats[x[1]][x[2]][y[2]] if x[1] == y[1] else 0
        if kx == "C":
            if ky in ("O", "F"):
                return 0
            return 1 if sections[y[1]].components[x[1]] == x[2] else 0
        if kx == "F" and ky == "S":
            return 1
        if kx == "O" and ky == "S":
            return sections[y[1]].meets_zero
        if (kx, ky) == ("S", "S"):
            i, j = x[1], y[1]
            if i == j:
                return -2
            a = sections[i].pairings.get(j)
            b = sections[j].pairings.get(i)
            if a is not None and b is not None and a != b:
                raise DomainError(f"sections {i} and {j} list different intersections")
            return a if a is not None else (b or 0)
        raise AssertionError((x, y))

    return [[pair(x, y) for y in labels] for x in labels]


def ns_gram(report: FibrationReport, sections=()) -> list[list[int]]:
    """Gram matrix of a Z-basis of the lattice spanned by the zero section,
    the fiber, non-identity components and the given sections."""
    from .lattice import lattice_from_generators

    return lattice_from_generators(ns_generator_gram(report, sections))
