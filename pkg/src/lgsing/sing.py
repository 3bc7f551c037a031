"""Singularity-category reports: stable Homs, perfectness, u-torsion, Milnor numbers."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ContextMismatch, WindowTooSmall
from .koszul import (KoszulModule, _check_window, _twist, rhom_trivial_dims, trivial_module,
                     u_power_nullhomotopy)
from .mf import (GradedHom, HomCohomology, MatrixFactorization, StableDims, box_product,
                 hom_cohomology_dims, identity_hom, is_null_homotopic)
from .orlov import fold
from .poly import INFINITE, QQ, Field, Poly, PolyMatrix, quotient_k_dim


@dataclass
class PerfectnessVerdict:
    """``witness`` is a contracting homotopy when perfect; otherwise ``refutation``
    holds the (nonzero) coordinates of the identity class in stable End."""

    perfect: bool
    witness: GradedHom | None = None
    refutation: list | None = None

    def __bool__(self):
        return self.perfect


@dataclass
class UTorsionReport:
    verdict: str  # "torsion", "not_torsion" or "indeterminate"
    order: int | None
    window: int
    stable_dims: tuple | None = None
    witness: dict | None = None
    notes: list = field(default_factory=list)


@dataclass
class SingReport:
    stable_dims: StableDims
    perfect: PerfectnessVerdict
    u_torsion: UTorsionReport | None = None
    rhom_dims: dict | None = None
    notes: list = field(default_factory=list)

    def consistent(self) -> bool:
        if self.perfect.perfect and self.stable_dims != StableDims(0, 0):
            return False
        if self.u_torsion is not None and self.u_torsion.verdict != "indeterminate":
            return (self.u_torsion.verdict == "torsion") == self.perfect.perfect
        return True


def _as_mf(M) -> MatrixFactorization:
    return fold(M) if isinstance(M, KoszulModule) else M


def stable_hom_dims(M, N) -> StableDims:
    """Stable Hom dimensions between two modules (or factorizations) over one LG pair."""
    E, F = _as_mf(M), _as_mf(N)
    if E.lg != F.lg:
        raise ContextMismatch("objects over different LG pairs")
    return hom_cohomology_dims(E, F)


def is_perfect(M) -> PerfectnessVerdict:
    """Perfect exactly when the identity of the fold is null-homotopic."""
    E = _as_mf(M)
    ok, s = is_null_homotopic(identity_hom(E))
    if ok:
        return PerfectnessVerdict(True, witness=s)
    coords = HomCohomology(E, E, 0).coordinates(identity_hom(E))
    assert any(coords), "identity has zero class but no homotopy was found"
    return PerfectnessVerdict(False, refutation=coords)


def u_torsion_order_point(M: KoszulModule, N: int) -> UTorsionReport:
    """Least ``n <= N`` with ``u^n`` null-homotopic on ``twisted_E(M)``.

    Torsion is decided first from the cohomology just above the top generator,
    where ``u`` is an isomorphism between levels; the homotopy ``D s + s D = u^n``
    is then solved exactly over the field, generator by generator.
    """
    try:
        _check_window(M, N)
    except WindowTooSmall as exc:
        return UTorsionReport("indeterminate", None, N, notes=[str(exc)])
    A = _twist(M, N)
    top = max(A.gens) if A.gens else 0
    stable = (A.cohomology_dim(top + 1), A.cohomology_dim(top + 2))
    if any(stable):
        return UTorsionReport("not_torsion", None, N, stable, notes=[f"stable levels {top + 1}, {top + 2}"])
    for n in range(1, N + 1):
        s = u_power_nullhomotopy(A, n)
        if s is not None:
            return UTorsionReport("torsion", n, N, stable, witness=s)
    return UTorsionReport("indeterminate", None, N, stable, notes=[f"no u^n null-homotopic for n <= {N}"])


def milnor_number(f: Poly):
    """Dimension of the Jacobian ring, or INFINITE for a non-isolated critical locus."""
    ctx = f.ctx
    p = ctx.field.p
    if p and p <= f.total_degree():
        raise ValueError(f"characteristic {p} too small for degree {f.total_degree()}")
    if ctx.nvars == 0:
        return 0
    partials = [f.diff(v) for v in ctx.vars]
    return quotient_k_dim(PolyMatrix(ctx, 1, len(partials), [partials]))


@dataclass
class ThomSebastianiReport:
    mu_f: int
    mu_g: int
    mu_sum: int
    multiplicative: bool
    kunneth: tuple | None = None  # (direct, from factors)

    @property
    def passed(self):
        return self.multiplicative and (self.kunneth is None or self.kunneth[0] == self.kunneth[1])


def thom_sebastiani_check(f: Poly, g: Poly, factorizations=None) -> ThomSebastianiReport:
    """``mu(f + g) = mu(f) mu(g)``, plus stable-End Kuenneth for supplied ``(E, F)``."""
    ctx = f.ctx.union(g.ctx)
    mf_, mg = milnor_number(f), milnor_number(g)
    if mf_ is INFINITE or mg is INFINITE:
        raise ValueError("Thom-Sebastiani check needs isolated singularities")
    ms = milnor_number(f.embed(ctx) + g.embed(ctx))
    kun = None
    if factorizations is not None:
        E, F = factorizations
        direct = hom_cohomology_dims(*(2 * (box_product(E, F),)))
        kun = (direct, hom_cohomology_dims(E, E).convolve(hom_cohomology_dims(F, F)))
    return ThomSebastianiReport(mf_, mg, ms, ms == mf_ * mg, kun)


def point_case_report(field_=QQ, window: int = 5) -> SingReport:
    """Consistency report for the trivial module over ``(field, 0)``."""
    if not isinstance(field_, Field):
        field_ = Field.parse(field_)
    T = trivial_module(field_)
    dims = stable_hom_dims(T, T)
    report = SingReport(dims, is_perfect(T), u_torsion_order_point(T, window),
                        rhom_trivial_dims(T, window), notes=[f"window {window}"])
    return report
