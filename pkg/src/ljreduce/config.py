"""Numerical tolerances shared by every module.

All thresholds live in one profile so the command line can scale the whole
family proportionally (a single --tol factor) without touching individual
call sites.  Iteration caps are not scaled.
"""

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    # subspace arithmetic
    rank_rtol: float = 1e-9      # relative singular-value cutoff for spans / null spaces
    rank_abs: float = 1e-12      # absolute floor; a numerically-zero stack has rank 0
    ortho: float = 1e-12         # basis orthonormality and hermiticity
    member_rtol: float = 1e-9    # membership residual, relative to max(1, |v|)

    # algebra verification
    closure: float = 1e-9        # product-closure residuals on basis pairs
    axiom: float = 1e-8          # identity residuals (relative)
    psd: float = 1e-9            # forgiveness on minimum eigenvalues

    # states
    state_vanish: float = 1e-9   # |omega(b)| treated as zero
    dykstra: float = 1e-9        # stopping residual for the extension solver
    roundtrip: float = 1e-7      # state reduce/extend round trips

    # GNS
    gelfand_rtol: float = 1e-10  # eigenvalue threshold for the Gelfand ideal
    gns: float = 1e-8            # representation invariants

    # cross-validation
    norm_agree: float = 1e-6     # structural vs infimum quotient norm

    dykstra_max_iter: int = 100_000

    def scaled(self, factor: float) -> "Tolerances":
        """Return a copy with every float tolerance multiplied by `factor`."""
        if factor <= 0:
            raise ValueError("tolerance scale factor must be positive")
        updates = {
            f.name: getattr(self, f.name) * factor
            for f in fields(self)
            if f.type == "float"
        }
        return replace(self, **updates)


TOL = Tolerances()


def set_scale(factor: float) -> None:
    """Rescale the active tolerance profile (used by the CLI --tol flag)."""
    global TOL
    TOL = Tolerances().scaled(factor)


def reset() -> None:
    global TOL
    TOL = Tolerances()
