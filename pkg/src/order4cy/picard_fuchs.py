"""Picard-Fuchs operators of the forms r^al (r-1)^be (r-lam)^ga dr / z^l on
z^N = r^A (r-1)^B (r-lam)^C: the exact certificate, Frobenius exponents,
the maximal-unipotent-monodromy criterion and numerical cross-checks."""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np
from scipy.integrate import solve_ivp

from .algebra import (
    LAM,
    Cover,
    CoverElement,
    RatFunc,
    UniPoly,
    cover_d_dlambda,
    cover_d_dr,
    cover_monomial,
    lam_const,
)
from .curves import RootOfUnity
from .errors import DomainError, IntegrationError

SINGULAR_POINTS = (0, 1, "infinity")


class MonodromyClass(str, enum.Enum):
    NON_UNIPOTENT = "NON_UNIPOTENT"
    UNIPOTENT_NONTRIVIAL = "UNIPOTENT_NONTRIVIAL"
    IDENTITY = "IDENTITY"


class MumReason(str, enum.Enum):
    ORDER_DEFICIT = "ORDER_DEFICIT"
    EXPONENT_ANALYSIS = "EXPONENT_ANALYSIS"
    UNIPOTENT_POINT = "UNIPOTENT_POINT"
    INCONCLUSIVE = "INCONCLUSIVE"
    AUTOMORPHISM_EIGENVALUE = "AUTOMORPHISM_EIGENVALUE"


@dataclass(frozen=True)
class PFParams:
    cover: Cover
    alpha: int
    beta: int
    gamma: int
    l: int

    def __post_init__(self):
        if self.l < 1:
            raise DomainError("the z-power l must be positive")

    @classmethod
    def of(cls, cover, form) -> "PFParams":
        return cls(Cover(*cover), *form)

    @property
    def a(self) -> Fraction:
        return -self.alpha + Fraction(self.l * self.cover.A, self.cover.N)

    @property
    def b(self) -> Fraction:
        return -self.beta + Fraction(self.l * self.cover.B, self.cover.N)

    @property
    def c(self) -> Fraction:
        return -self.gamma + Fraction(self.l * self.cover.C, self.cover.N)

    def abc(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.a, self.b, self.c

    def form(self) -> CoverElement:
        return cover_monomial(self.cover, self.alpha, self.beta, self.gamma, self.l)


@dataclass(frozen=True)
class PFOperator:
    """p2 d^2/dlam^2 + p1 d/dlam + p0 with
    p2 = lam(1-lam), p1 = a+c - lam(a+b+2c), p0 = -c(a+b+c-1)."""

    a: Fraction
    b: Fraction
    c: Fraction
    order: int = 2

    @classmethod
    def from_abc(cls, a, b, c) -> "PFOperator":
        return cls(Fraction(a), Fraction(b), Fraction(c))

    @property
    def p2(self) -> RatFunc:
        return LAM * (1 - LAM)

    @property
    def p1(self) -> RatFunc:
        a, b, c = self.a, self.b, self.c
        return lam_const(a + c) - LAM * (a + b + 2 * c)

    @property
    def p0(self) -> RatFunc:
        a, b, c = self.a, self.b, self.c
        return lam_const(-c * (a + b + c - 1))

    def coefficients(self) -> tuple[RatFunc, RatFunc, RatFunc]:
        return self.p2, self.p1, self.p0

    def gauss_parameters(self) -> tuple[Fraction, Fraction, Fraction]:
        """(a~, b~, c~) of the Gauss operator equal to this one."""
        return self.c, self.a + self.b + self.c - 1, self.a + self.c

    def to_json(self) -> dict:
        return {
            "abc": [str(self.a), str(self.b), str(self.c)],
            "p2": self.p2.to_str("lambda"),
            "p1": self.p1.to_str("lambda"),
            "p0": self.p0.to_str("lambda"),
        }


def pf_operator(p: PFParams) -> PFOperator:
    return PFOperator(p.a, p.b, p.c)


def apply_operator(op: PFOperator, e: CoverElement) -> CoverElement:
    d1 = cover_d_dlambda(e)
    d2 = cover_d_dlambda(d1)
    return d2 * op.p2 + d1 * op.p1 + e * op.p0


def exact_certificate(p: PFParams) -> tuple[CoverElement, CoverElement]:
    """h = r^(al+1)(r-1)^(be+1)(r-lam)^(ga-1) z^-l and L(omega) - c dh/dr."""
    op = pf_operator(p)
    h = cover_monomial(p.cover, p.alpha + 1, p.beta + 1, p.gamma - 1, p.l)
    residual = apply_operator(op, p.form()) - cover_d_dr(h) * p.c
    return h, residual


# --- local analysis -------------------------------------------------------

def _poly_shift(p: UniPoly, s) -> UniPoly:
    return p.compose(UniPoly([s, 1]))


def _poly_reverse(p: UniPoly, degree: int) -> UniPoly:
    """x^degree p(1/x)."""
    coeffs = list(p.coeffs) + [Fraction(0)] * (degree - p.degree)
    return UniPoly(coeffs[::-1])


def _at_infinity(f: RatFunc) -> tuple[UniPoly, UniPoly, int]:
    """f(1/x) = x^k * N(x) / D(x) with N(0), D(0) != 0 returned as (N, D, k)."""
    dn, dd = f.num.degree, f.den.degree
    return _poly_reverse(f.num, dn), _poly_reverse(f.den, dd), dd - dn


def _series(num: UniPoly, den: UniPoly, shift: int, n: int) -> list[Fraction]:
    """First n coefficients of x^shift * num/den (den(0) != 0, result must be
    a power series)."""
    d0 = den.coeffs[0]
    out = []
    nc = list(num.coeffs)
    dc = list(den.coeffs)
    q: list[Fraction] = []
    for k in range(n - shift if shift >= 0 else n - shift):
        s = nc[k] if k < len(nc) else Fraction(0)
        s -= sum(dc[j] * q[k - j] for j in range(1, min(k, len(dc) - 1) + 1))
        q.append(s / d0)
    if shift >= 0:
        out = [Fraction(0)] * shift + q
    else:
        if any(q[:-shift]):
            raise DomainError("point is not a regular singular point")
        out = q[-shift:]
    return out[:n]


def _local_series(op: PFOperator, point, n: int) -> tuple[list, list]:
    """Coefficients of q1 = x P1/P2 and q0 = x^2 P0/P2 in the local
    coordinate x at the point (x = lam, lam - 1 or 1/lam)."""
    p2, p1, p0 = op.coefficients()
    if point in (0, 1):
        x = LAM - point
        q1 = x * p1 * p2.inverse()
        q0 = x * x * p0 * p2.inverse()

        def loc(f):
            return _poly_shift(f.num, Fraction(point)), _poly_shift(f.den, Fraction(point))

        return _series(*loc(q1), 0, n), _series(*loc(q0), 0, n)
    if point == "infinity":
        # d/dlam = -x^2 d/dx, d^2/dlam^2 = x^4 d^2/dx^2 + 2 x^3 d/dx
        q1 = 2 - LAM * p1 * p2.inverse()  # evaluated below at lam = 1/x
        # x P1/P2 = x (2x^3 p2 - x^2 p1)/(x^4 p2) = 2 - p1/(x p2) = 2 - lam p1/p2
        q0 = LAM * LAM * p0 * p2.inverse()  # x^2 p0 / (x^4 p2) = lam^2 p0/p2
        N1, D1, k1 = _at_infinity(q1)
        N0, D0, k0 = _at_infinity(q0)
        return _series(N1, D1, k1, n), _series(N0, D0, k0, n)
    raise DomainError(f"{point!r} is not a singular point of the operator")


def _rational_sqrt(x: Fraction) -> Fraction:
    if x < 0:
        raise DomainError("indicial exponents are not real")
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n != x.numerator or d * d != x.denominator:
        raise DomainError("indicial exponents are irrational")
    return Fraction(n, d)


@dataclass(frozen=True)
class IndicialData:
    point: object
    exponents: tuple
    operator: Optional[PFOperator] = field(default=None, compare=False)

    def to_json(self) -> dict:
        return {"point": str(self.point), "exponents": [str(e) for e in self.exponents]}


def indicial_polynomial(op: PFOperator, point) -> tuple[Fraction, Fraction]:
    """(B, C) with indicial polynomial rho^2 + B rho + C."""
    q1, q0 = _local_series(op, point, 1)
    return q1[0] - 1, q0[0]


def indicial_exponents(op: PFOperator, point) -> IndicialData:
    B, C = indicial_polynomial(op, point)
    root = _rational_sqrt(B * B - 4 * C)
    r1, r2 = (-B - root) / 2, (-B + root) / 2
    exps = (r1, r2) if r2 != 0 else (r2, r1)
    if r1 == 0:
        exps = (r1, r2)
    return IndicialData(point, exps, op)


def has_log_term(d: IndicialData) -> bool:
    """Frobenius recurrence obstruction at the larger exponent."""
    lo, hi = sorted(d.exponents)
    k = hi - lo
    if k.denominator != 1:
        return False
    k = int(k)
    if k == 0:
        return True
    if d.operator is None:
        raise DomainError("log-term test needs the operator")
    q1, q0 = _local_series(d.operator, d.point, k + 1)

    def f0(s):
        return s * (s - 1) + q1[0] * s + q0[0]

    coeffs = [Fraction(1)]
    for m in range(1, k + 1):
        rhs = sum((q1[j] * (lo + m - j) + q0[j]) * coeffs[m - j] for j in range(1, m + 1))
        if m == k:
            return rhs != 0
        coeffs.append(-rhs / f0(lo + m))
    return False


@dataclass(frozen=True)
class LocalMonodromy:
    classification: MonodromyClass
    eigenvalues: tuple
    log_term: bool


def local_monodromy_class(d: IndicialData) -> LocalMonodromy:
    r1, r2 = d.exponents
    eig = (RootOfUnity(r1), RootOfUnity(r2))
    if (r1 - r2).denominator != 1:
        return LocalMonodromy(MonodromyClass.NON_UNIPOTENT, eig, False)
    log = has_log_term(d)
    if eig[0].exponent != 0:
        return LocalMonodromy(MonodromyClass.NON_UNIPOTENT, eig, log)
    kind = MonodromyClass.UNIPOTENT_NONTRIVIAL if log else MonodromyClass.IDENTITY
    return LocalMonodromy(kind, eig, log)


def fuchs_sum(op: PFOperator) -> Fraction:
    return sum(sum(indicial_exponents(op, pt).exponents) for pt in SINGULAR_POINTS)


def mum_absent_for_cy3(operator_order: int, h21: int, op: Optional[PFOperator] = None):
    """(absent, reason): a MUM point needs a single unipotent Jordan block of
    size 2*h21 + 2, impossible when the operator has smaller order."""
    if h21 < 0:
        raise DomainError("h21 must be nonnegative")
    rank = 2 * h21 + 2
    if operator_order < rank:
        return True, MumReason.ORDER_DEFICIT
    if operator_order == rank and op is not None:
        for pt in SINGULAR_POINTS:
            if local_monodromy_class(indicial_exponents(op, pt)).classification is MonodromyClass.UNIPOTENT_NONTRIVIAL:
                return False, MumReason.UNIPOTENT_POINT
        return True, MumReason.EXPONENT_ANALYSIS
    return False, MumReason.INCONCLUSIVE


# --- numerical monodromy --------------------------------------------------

def _numeric_coeffs(f: RatFunc):
    num = np.array([complex(c) for c in reversed(f.num.coeffs)] or [0j])
    den = np.array([complex(c) for c in reversed(f.den.coeffs)])
    return lambda z: np.polyval(num, z) / np.polyval(den, z)


def standard_loop(around, base_point: complex = 0.5, sides: int = 16) -> list[complex]:
    """Counterclockwise polygon around 0 or 1 through the base point 1/2, or
    a clockwise circle of radius 3 around both (a loop around infinity)."""
    base = complex(base_point)
    if around == 0:
        return [base * cmath.exp(2j * math.pi * k / sides) for k in range(sides + 1)]
    if around == 1:
        rad = 1 - base
        return [1 - rad * cmath.exp(2j * math.pi * k / sides) for k in range(sides + 1)]
    if around == "infinity":
        rad, n = 3.0, 2 * sides
        circle = [base + rad * cmath.exp(1j * (-math.pi / 2 - 2 * math.pi * k / n)) for k in range(n + 1)]
        return [base] + circle + [base]
    raise DomainError(f"cannot build a loop around {around!r}")


def _segment_distance(p: complex, a: complex, b: complex) -> float:
    ab = b - a
    if ab == 0:
        return abs(p - a)
    t = max(0.0, min(1.0, ((p - a) * ab.conjugate()).real / abs(ab) ** 2))
    return abs(p - (a + t * ab))


@dataclass
class MonodromyResult:
    base_point: complex
    loop: list
    matrix: np.ndarray
    eigenvalues: tuple
    classification: MonodromyClass
    det_expected: complex
    diagnostics: dict = field(default_factory=dict)

    def to_json(self, digits: int = 12) -> dict:
        def c(z):
            return [float(f"{z.real:.{digits}g}"), float(f"{z.imag:.{digits}g}")]

        return {
            "basePoint": c(complex(self.base_point)),
            "matrix": [[c(z) for z in row] for row in self.matrix],
            "eigenvalues": [c(z) for z in self.eigenvalues],
            "classification": self.classification.value,
            "det": c(complex(np.linalg.det(self.matrix))),
            "detExpected": c(self.det_expected),
        }


def _classify_numeric(M: np.ndarray, tol: float) -> MonodromyClass:
    eye = np.eye(2)
    if np.linalg.norm(M - eye) < tol:
        return MonodromyClass.IDENTITY
    ev = np.linalg.eigvals(M)
    if np.all(np.abs(ev - 1) < math.sqrt(tol)) and np.linalg.norm((M - eye) @ (M - eye)) < tol:
        return MonodromyClass.UNIPOTENT_NONTRIVIAL
    return MonodromyClass.NON_UNIPOTENT


def numeric_monodromy(op: PFOperator, base_point: complex = 0.5, around=0, tolerance: float = 1e-8,
                      loop: Optional[list] = None, margin: float = 0.25, max_steps: int = 200_000,
                      classify_tolerance: float = 1e-6) -> MonodromyResult:
    """Transport the fundamental matrix with identity initial data along a
    polygonal loop; the result is the monodromy matrix in that basis."""
    base = complex(base_point)
    if loop is None:
        loop = standard_loop(around, base)
    loop = [complex(z) for z in loop]
    if abs(loop[0] - base) > 1e-14 or abs(loop[-1] - base) > 1e-14:
        raise DomainError("loop must start and end at the base point")
    for s in (0, 1):
        for a, b in zip(loop, loop[1:]):
            if _segment_distance(s, a, b) < margin:
                raise DomainError(f"loop passes within {margin} of the singular point {s}")
    P2, P1, P0 = (_numeric_coeffs(f) for f in op.coefficients())
    counter = {"nfev": 0}

    def rhs(t, y, a, dz):
        counter["nfev"] += 1
        if counter["nfev"] > max_steps:
            raise _StepBudget()
        z = a + t * dz
        p2 = P2(z)
        q1, q0 = P1(z) / p2, P0(z) / p2
        y0, y1, y2, y3, _ = y
        # rows (f, f') for the two solutions stored column-wise
        return dz * np.array([y2, y3, -q0 * y0 - q1 * y2, -q0 * y1 - q1 * y3, -q1])

    state = np.array([1, 0, 0, 1, 0], dtype=complex)
    segments = []
    try:
        for a, b in zip(loop, loop[1:]):
            dz = b - a
            if dz == 0:
                continue
            sol = solve_ivp(rhs, (0.0, 1.0), state, method="DOP853", args=(a, dz),
                            rtol=tolerance, atol=tolerance * 1e-2)
            if sol.status != 0:
                raise IntegrationError(f"integration failed on segment {a} -> {b}: {sol.message}",
                                       {"segment": (a, b), "nfev": counter["nfev"], "message": sol.message})
            segments.append(sol.nfev)
            state = sol.y[:, -1]
    except _StepBudget:
        raise IntegrationError(f"step budget of {max_steps} evaluations exhausted",
                               {"nfev": counter["nfev"], "segments_done": len(segments)}) from None
    M = np.array([[state[0], state[1]], [state[2], state[3]]])
    ev = tuple(sorted(np.linalg.eigvals(M), key=lambda z: (round(cmath.phase(z), 6), z.real)))
    det_expected = cmath.exp(state[4])
    return MonodromyResult(base, loop, M, ev, _classify_numeric(M, classify_tolerance), det_expected,
                           {"nfev": counter["nfev"], "segments": len(segments)})


class _StepBudget(Exception):
    pass


def eigenvalues_match(result: MonodromyResult, exponents, tolerance: float = 1e-6) -> bool:
    """Compare the eigenvalues with exp(2 pi i rho) as multisets.

    For a 2x2 matrix the multiset is fixed by trace and determinant, which
    stay well conditioned when the eigenvalue is repeated; the eigenvalues
    of a Jordan block only carry about half the digits of the matrix.
    """
    e1, e2 = (complex(RootOfUnity(e)) for e in exponents)
    M = result.matrix
    return bool(abs(np.trace(M) - (e1 + e2)) <= tolerance
                and abs(np.linalg.det(M) - e1 * e2) <= tolerance)


# --- periods --------------------------------------------------------------

_ENDPOINTS = {"0": 0, "1": 1, "lambda": "lambda", "infinity": "infinity", "inf": "infinity"}


def _endpoint(x):
    key = str(x).strip().lower()
    if key not in _ENDPOINTS:
        raise DomainError(f"segment endpoint {x!r} is not a branch point")
    return _ENDPOINTS[key]


def _check_boundary(p: PFParams, pt):
    a, b, c = p.abc()
    exponent = {0: 1 - a, 1: 1 - b, "lambda": -1 - c, "infinity": a + b + c - 1}[pt]
    if exponent <= 0:
        raise DomainError(f"boundary term does not vanish at endpoint {pt}: "
                          f"h has exponent {exponent} there")


def _period_mp(p: PFParams, lam, segment, dps: int):
    pts = [_endpoint(s) for s in segment]
    if pts[0] == pts[1]:
        raise DomainError("segment endpoints must differ")
    for pt in pts:
        _check_boundary(p, pt)
    with mpmath.workdps(dps):
        lam = mpmath.mpc(lam)
        if lam in (0, 1):
            raise DomainError("lambda must avoid 0 and 1")
        a, b, c = (mpmath.mpf(x.numerator) / x.denominator for x in p.abc())

        def f(r):
            r = mpmath.mpc(r)
            return mpmath.power(r, -a) * mpmath.power(r - 1, -b) * mpmath.power(r - lam, -c)

        def loc(pt):
            return lam if pt == "lambda" else (mpmath.inf if pt == "infinity" else mpmath.mpf(pt))

        start, end = pts
        if start == "infinity":
            start, end = end, start
            sign = -1
        else:
            sign = 1
        z0 = loc(start)
        if end == "infinity":
            nodes = [z0]
            # split where another branch point lies on the ray [z0, +inf)
            for s in (0, 1, lam):
                s = mpmath.mpc(s)
                if s.imag == mpmath.mpc(z0).imag and s.real > mpmath.mpc(z0).real:
                    nodes.append(s)
            nodes = sorted(set(nodes), key=lambda z: mpmath.mpc(z).real) + [mpmath.inf]
            total = mpmath.mpc(0)
            for u, v in zip(nodes, nodes[1:]):
                if v == mpmath.inf:
                    total += mpmath.quad(lambda t: f(u + t), [0, mpmath.inf])
                else:
                    total += mpmath.quad(f, [u, v])
            return sign * total
        z1 = loc(end)
        nodes = [mpmath.mpf(0), mpmath.mpf(1)]
        for s in (0, 1, lam):
            s = mpmath.mpc(s)
            d = z1 - z0
            t = (s - z0) / d
            if abs(t.imag) < mpmath.eps * 10 and 0 < t.real < 1:
                nodes.append(t.real)
        nodes = sorted(set(nodes))
        return sign * mpmath.quad(lambda t: f(z0 + t * (z1 - z0)), nodes) * (z1 - z0)


def numeric_period(p: PFParams, lam: complex, segment=(0, 1), dps: int = 30) -> complex:
    """Integral of r^-a (r-1)^-b (r-lam)^-c dr along a straight segment
    between branch points, principal branch of each factor."""
    return complex(_period_mp(p, lam, segment, dps))


def period_ode_residual(p: PFParams, lam: float, segment=(0, 1), step: float = 1e-3,
                        dps: int = 30) -> float:
    """|L(P)| / |P| at real lam with a five-point stencil in lam."""
    op = pf_operator(p)
    with mpmath.workdps(dps):
        lam = mpmath.mpf(lam)
        h = mpmath.mpf(step)
        vals = [_period_mp(p, lam + k * h, segment, dps) for k in (-2, -1, 0, 1, 2)]
        d1 = (vals[0] - 8 * vals[1] + 8 * vals[3] - vals[4]) / (12 * h)
        d2 = (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3] - vals[4]) / (12 * h * h)
        a, b, c = (mpmath.mpf(x.numerator) / x.denominator for x in op_abc(op))
        p2 = lam * (1 - lam)
        p1 = a + c - lam * (a + b + 2 * c)
        p0 = -c * (a + b + c - 1)
        res = p2 * d2 + p1 * d1 + p0 * vals[2]
        return float(abs(res) / abs(vals[2]))


def op_abc(op: PFOperator):
    return op.a, op.b, op.c


def gauss_series_coefficients(op: PFOperator, n: int) -> list[Fraction]:
    """Taylor coefficients at 0 of the holomorphic solution, from the
    hypergeometric parameters (a~)_k (b~)_k / ((c~)_k k!)."""
    at, bt, ct = op.gauss_parameters()
    out = [Fraction(1)]
    for k in range(n - 1):
        if ct + k == 0:
            raise DomainError("c~ is a nonpositive integer; no holomorphic Gauss series")
        out.append(out[-1] * (at + k) * (bt + k) / ((ct + k) * (k + 1)))
    return out
