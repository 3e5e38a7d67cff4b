"""Independent reference computations used to freeze expected values.

Nothing here imports the package under test: each oracle recomputes a
quantity by a different route (sympy symbolics, scipy special functions,
mpmath quadrature, closed forms).
"""

from __future__ import annotations

from fractions import Fraction
from math import floor

import mpmath
import scipy.special
import sympy as sp

r, lam = sp.symbols("r lam")


def certificate_residual(N, A, B, C, alpha, beta, gamma, l, points=((3, "1/3"), (5, "2/7")),
                         h_factor=1) -> float:
    """max |L(omega) - c dh/dr| / |omega| over sample points r > 1 > lam > 0
    where every factor is positive, by sympy differentiation of the genuine
    multivalued functions evaluated at 50 digits.  h_factor != 1 gives a
    deliberately wrong identity for negative controls."""
    a = -alpha + sp.Rational(l * A, N)
    b = -beta + sp.Rational(l * B, N)
    c = -gamma + sp.Rational(l * C, N)
    omega = r ** (-a) * (r - 1) ** (-b) * (r - lam) ** (-c)
    h = r ** (1 - a) * (r - 1) ** (1 - b) * (r - lam) ** (-1 - c)
    L = (lam * (1 - lam) * sp.diff(omega, lam, 2)
         + (a + c - lam * (a + b + 2 * c)) * sp.diff(omega, lam)
         - c * (a + b + c - 1) * omega)
    expr = L - h_factor * c * sp.diff(h, r)
    worst = 0.0
    for rv, lv in points:
        subs = {r: sp.Rational(rv), lam: sp.Rational(lv)}
        worst = max(worst, float(abs(expr.subs(subs).evalf(50) / omega.subs(subs).evalf(50))))
    return worst


def pf_coefficients(a, b, c):
    """(p1 constant term, p1 lambda coefficient, p0) of the operator."""
    a, b, c = map(Fraction, (a, b, c))
    return a + c, -(a + b + 2 * c), -c * (a + b + c - 1)


def squarefree_sympy(expr_text: str):
    s = sp.symbols("s")
    _, factors = sp.sqf_list(sp.Poly(sp.sympify(expr_text), s))
    return [(str(sp.Poly(f, s).monic().as_expr()), m) for f, m in factors]


def hyperelliptic_genus(finite_simple_roots: int) -> int:
    """z^2 = squarefree of degree k: genus floor((k - 1) / 2)."""
    return floor((finite_simple_roots - 1) / 2)


def integer_det(gram) -> int:
    return int(sp.Matrix(gram).det())


def smith_invariants(m) -> list[int]:
    from sympy.matrices.normalforms import smith_normal_form

    D = smith_normal_form(sp.Matrix(m), domain=sp.ZZ)
    return [abs(int(D[i, i])) for i in range(min(D.shape))]


def legendre_period(lam_value: float) -> complex:
    """Integral over [0, 1] of dr / sqrt(r (r-1) (r-lam)) with principal
    square roots of each factor: -2 K(lam) - 2i K(1 - lam) for 0 < lam < 1."""
    K = scipy.special.ellipk
    return complex(-2 * K(lam_value), -2 * K(1 - lam_value))


def legendre_real_period(lam_value: float) -> float:
    """Integral over [1, infinity) of dr / sqrt(r (r-1) (r-lam)) = 2 K(lam)."""
    return float(2 * scipy.special.ellipk(lam_value))


def quad_period(a, b, c, lam_value, lo, hi, dps=30) -> complex:
    """Direct mpmath quadrature of r^-a (r-1)^-b (r-lam)^-c on a real
    interval, principal branch of each factor."""
    with mpmath.workdps(dps):
        f = lambda x: (mpmath.power(mpmath.mpc(x), -a) * mpmath.power(mpmath.mpc(x) - 1, -b)
                       * mpmath.power(mpmath.mpc(x) - lam_value, -c))
        nodes = sorted({lo, hi} | ({lam_value} if lo < lam_value < hi else set()))
        return complex(mpmath.quad(f, nodes))


def gauss_hypergeometric(at, bt, ct, z) -> complex:
    return complex(mpmath.hyp2f1(float(at), float(bt), float(ct), z))


def kodaira_from_order(order: int):
    """Fiber of y^2 = x^3 + a x where a vanishes to the given order:
    discriminant order 3*ord, (type, euler, components)."""
    return {1: ("III", 3, 2), 2: ("I0*", 6, 5), 3: ("III*", 9, 8)}[order]


def lefschetz_closed_form(points: int, rational_curves: int) -> int:
    return points + 2 * rational_curves


def borcea_voisin(components: int, genus_sum: int) -> tuple[int, int]:
    return 11 + 5 * components - genus_sum, 11 + 5 * genus_sum - components
