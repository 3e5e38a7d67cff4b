"""Lefschetz bookkeeping for order-4 non-symplectic automorphisms of K3
surfaces and Hodge numbers of the resulting Calabi-Yau quotients.

Notation: c curves are fixed by the automorphism, d curves are fixed by its
square and mapped to themselves, and a curves are fixed by the square but
moved by the automorphism (they come in switched pairs, so a is even).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError, InconsistencyError, NotCalabiYauAdmissible

K3_B2 = 22


@dataclass(frozen=True)
class FixedLocusSummary:
    isolated_points: int
    fixed_curve_genera: tuple = ()
    invariant_curves: int = 0
    switched_curves: int = 0

    def __post_init__(self):
        object.__setattr__(self, "fixed_curve_genera", tuple(self.fixed_curve_genera))
        counts = (self.isolated_points, self.invariant_curves, self.switched_curves)
        if min(counts) < 0 or any(g < 0 for g in self.fixed_curve_genera):
            raise DomainError("fixed-locus counts must be nonnegative")
        if self.switched_curves % 2:
            raise DomainError("switched curves come in pairs")

    @property
    def c(self) -> int:
        return len(self.fixed_curve_genera)

    @property
    def d(self) -> int:
        return self.invariant_curves

    @property
    def a(self) -> int:
        return self.switched_curves

    def square_curve_count(self) -> int:
        return self.c + self.d + self.a

    def to_json(self) -> dict:
        return {
            "isolatedPoints": self.isolated_points,
            "fixedCurveGenera": list(self.fixed_curve_genera),
            "invariantCurves": self.invariant_curves,
            "switchedCurves": self.switched_curves,
        }

    @classmethod
    def from_json(cls, data: dict) -> "FixedLocusSummary":
        return cls(
            data["isolatedPoints"],
            tuple(data.get("fixedCurveGenera", ())),
            data.get("invariantCurves", 0),
            data.get("switchedCurves", 0),
        )


@dataclass(frozen=True)
class EigenspaceDims:
    """Dimensions of the eigenspaces of H^2 for eigenvalues 1, -1, i, -i."""

    d1: int
    dm1: int
    di: int
    dmi: int

    def __post_init__(self):
        if min(self.d1, self.dm1, self.di, self.dmi) < 0:
            raise DomainError("eigenspace dimensions must be nonnegative")
        if self.d1 + self.dm1 + self.di + self.dmi != K3_B2:
            raise DomainError("eigenspace dimensions must add up to 22")
        if self.di != self.dmi:
            raise DomainError("the i and -i eigenspaces are complex conjugate")

    def as_tuple(self) -> tuple:
        return (self.d1, self.dm1, self.di, self.dmi)


@dataclass(frozen=True)
class CYHodge:
    h11: int
    h21: int

    def __post_init__(self):
        if self.h11 < 1 or self.h21 < 0:
            raise DomainError(f"invalid Hodge numbers ({self.h11}, {self.h21})")

    @property
    def euler(self) -> int:
        return 2 * (self.h11 - self.h21)


def chi_fixed_locus(f: FixedLocusSummary, for_square: bool = False) -> int:
    """Topological Euler characteristic of the fixed locus.

    The square fixes the c + d + a curves, all rational except the c curves
    whose genera are listed; the isolated points of the automorphism lie on
    them.
    """
    curves = sum(2 - 2 * g for g in f.fixed_curve_genera)
    if for_square:
        return curves + 2 * (f.d + f.a)
    return f.isolated_points + curves


def lefschetz_number(e: EigenspaceDims) -> int:
    # H^0, H^4 give 1 each; the traces on the i and -i eigenspaces cancel
    return 2 + e.d1 - e.dm1


def square_lefschetz_number(e: EigenspaceDims) -> int:
    """Lefschetz number of the square, which acts by -1 on the (+-i) parts."""
    return 2 + e.d1 + e.dm1 - e.di - e.dmi


def solve_eigenspace_dims(chi_fix: int, rank_t: int) -> EigenspaceDims:
    if rank_t <= 0 or rank_t % 2:
        raise InconsistencyError(f"rank T = {rank_t} must be even and positive")
    total = K3_B2 - rank_t
    diff = chi_fix - 2
    if (total + diff) % 2:
        raise InconsistencyError(f"no integral solution for chi = {chi_fix}, rank T = {rank_t}")
    d1, dm1 = (total + diff) // 2, (total - diff) // 2
    if d1 < 0 or dm1 < 0:
        raise InconsistencyError(f"negative eigenspace dimension for chi = {chi_fix}, rank T = {rank_t}")
    return EigenspaceDims(d1, dm1, rank_t // 2, rank_t // 2)


def invariant_h11_dim(e: EigenspaceDims) -> int:
    """Invariant part of H^{1,1} of E x S: the surface's invariant classes
    plus the class of E."""
    return e.d1 + 1


def square_invariant_h11_dim(e: EigenspaceDims) -> int:
    return e.d1 + e.dm1 + 1


def _require_rational(f: FixedLocusSummary):
    bad = [g for g in f.fixed_curve_genera if g > 0]
    if bad:
        raise NotCalabiYauAdmissible(f"fixed curves of positive genus {bad} obstruct the construction")


def cy_hodge_numbers(f: FixedLocusSummary, dim_h11_inv: int, rank_t: int) -> CYHodge:
    """Hodge numbers of the crepant resolution of (E_i x S)/(order 4).

    Each fixed or invariant curve contributes 3 + 4 classes, each switched
    curve 2; h21 is the i-eigenspace of H^{1,1}(S).
    """
    _require_rational(f)
    if rank_t <= 0 or rank_t % 2:
        raise InconsistencyError(f"rank T = {rank_t} must be even and positive")
    cd = f.c + f.d
    h11 = dim_h11_inv + 3 * cd + 2 * f.a + 4 * cd
    return CYHodge(h11, rank_t // 2 - 1)


def intermediate_z_hodge(f: FixedLocusSummary, dim_h11_inv_square: int, rank_t: int) -> CYHodge:
    """Hodge numbers of the resolution of (E_i x S) by the square.

    h21 is the whole (+-i) part of H^{1,1}(S) tensored with H^{1,0}(E),
    i.e. rank T - 1 once H^{2,0} and H^{0,2} are removed.
    """
    _require_rational(f)
    if rank_t <= 0 or rank_t % 2:
        raise InconsistencyError(f"rank T = {rank_t} must be even and positive")
    h11 = dim_h11_inv_square + 4 * f.square_curve_count()
    return CYHodge(h11, rank_t - 1)


def borcea_voisin_hodge(components: int, genus_sum: int) -> CYHodge:
    """Hodge numbers for (E x S)/involution with fixed locus of N curves of
    total genus N' on S."""
    return CYHodge(11 + 5 * components - genus_sum, 11 + 5 * genus_sum - components)


def forced_transcendental_rank(trivial_rank: int, moduli: int) -> int | None:
    """rank T <= 22 - trivial rank, and rank T / 2 - 1 >= moduli; return the
    rank when the two bounds meet."""
    upper = K3_B2 - trivial_rank
    lower = 2 * (moduli + 1)
    if lower > upper:
        raise InconsistencyError(f"moduli count {moduli} exceeds what rank T <= {upper} allows")
    return upper if upper == lower else None


@dataclass
class HodgePipeline:
    """All intermediate values from a fixed locus and rank T."""

    fixed: FixedLocusSummary
    rank_t: int
    chi: int = field(init=False)
    dims: EigenspaceDims = field(init=False)
    hodge: CYHodge = field(init=False)
    z_hodge: CYHodge = field(init=False)

    def __post_init__(self):
        self.chi = chi_fixed_locus(self.fixed)
        self.dims = solve_eigenspace_dims(self.chi, self.rank_t)
        self.hodge = cy_hodge_numbers(self.fixed, invariant_h11_dim(self.dims), self.rank_t)
        self.z_hodge = intermediate_z_hodge(self.fixed, square_invariant_h11_dim(self.dims), self.rank_t)
