"""Randomized certification suites behind `ljreduce certify` and the
acceptance tests.

Each suite runs `count` deterministic instances (seeded per instance),
asserts the relevant certificate, and reports pass counts with the worst
observed residual.  Instances are drawn from a fixed rotation of profiles:
full Hermitian algebras M_n, Hermitian parts of block-diagonal algebras,
commutative diagonal algebras, and random unital *-subalgebras.
"""

from dataclasses import dataclass, field

import numpy as np

from . import matspace
from .constraints import (
    ConstrainedSystem,
    constrained_ideal,
    multiplier_algebra,
    t_reduce,
    verify_equivalence,
    weak_commutant,
)
from .core import complexify, verify_dynamical_correspondence, verify_ljb_axioms
from .errors import LJError
from .genrand import GenSpec, gen_algebra, gen_ideal, gen_state, gen_system
from .gns import gns, is_pure, purity_obstruction, reduced_gns_equivalence
from .reduction import (
    quotient_norm,
    quotient_norm_infimum,
    reduce_by_ideal,
    reduce_by_subalgebra,
    verify_quotient_well_defined,
)
from .states import (
    StateFunctional,
    extend_state,
    random_quotient_state,
    reduce_state,
    verify_state_correspondence,
)


@dataclass
class SuiteResult:
    suite: str
    count: int
    passes: int
    worst_residual: float
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.passes == self.count

    def to_dict(self) -> dict:
        out = {
            "suite": self.suite,
            "count": self.count,
            "passes": self.passes,
            "worst_residual": float(self.worst_residual),
            "passed": bool(self.passed),
        }
        if self.failures:
            out["failures"] = self.failures[:10]
        return out

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (f"suite {self.suite}: {self.passes}/{self.count} {status}, "
                f"worst residual {self.worst_residual:.3e}")


def _algebra_specs(seed: int, count: int, max_n: int = 5):
    """Deterministic rotation over the four carrier profiles."""
    rng = np.random.default_rng([seed, 0xA16])
    specs = []
    for i in range(count):
        kind = i % 4
        if kind == 0:
            n = 1 + i // 4 % max_n
            specs.append(GenSpec(seed=seed + i, n=n, profile="full_matrix"))
        elif kind == 1:
            n = int(rng.integers(2, max_n + 1))
            sizes = []
            left = n
            while left:
                k = int(rng.integers(1, left + 1))
                sizes.append(k)
                left -= k
            specs.append(GenSpec(seed=seed + i, n=n, profile="block_diagonal",
                                 block_sizes=tuple(sizes)))
        elif kind == 2:
            n = int(rng.integers(1, max_n + 2))
            specs.append(GenSpec(seed=seed + i, n=n, profile="commutative"))
        else:
            n = int(rng.integers(2, min(max_n, 4) + 1))
            target = int(rng.integers(n, n * n + 1))
            specs.append(GenSpec(seed=seed + i, n=n,
                                 profile="random_unital_subalgebra",
                                 target_dim=target))
    return specs


def _system_specs(seed: int, count: int, max_n: int = 6):
    """Constrained systems with mostly projection constraints."""
    rng = np.random.default_rng([seed, 0x5F5])
    out = []
    for i in range(count):
        kind = i % 3
        if kind == 0:
            n = int(rng.integers(2, min(max_n, 4) + 1))
            spec = GenSpec(seed=seed + i, n=n, profile="full_matrix")
        elif kind == 1:
            n = int(rng.integers(2, max_n + 1))
            sizes = []
            left = n
            while left:
                k = int(rng.integers(1, left + 1))
                sizes.append(k)
                left -= k
            spec = GenSpec(seed=seed + i, n=n, profile="block_diagonal",
                           block_sizes=tuple(sizes))
        else:
            n = int(rng.integers(2, min(max_n, 5) + 1))
            target = int(rng.integers(n, n * n + 1))
            spec = GenSpec(seed=seed + i, n=n,
                           profile="random_unital_subalgebra",
                           target_dim=target)
        n_constraints = int(rng.integers(1, 4))
        projections = bool(rng.random() < 0.85)
        out.append((spec, n_constraints, projections))
    return out


def suite_axioms(seed: int = 0, count: int = 100) -> SuiteResult:
    """Structural identities and the dynamical correspondence per algebra."""
    passes = 0
    worst = 0.0
    failures = []
    for i, spec in enumerate(_algebra_specs(seed, count)):
        alg = gen_algebra(spec)
        rep1 = verify_ljb_axioms(alg, trials=10, rng_seed=seed + i)
        rep2 = verify_dynamical_correspondence(alg, trials=10, rng_seed=seed + i)
        worst = max(worst, rep1.worst, rep2.worst)
        if rep1.passed and rep2.passed:
            passes += 1
        else:
            failures.append({"instance": i, "spec": spec.profile,
                             "worst": max(rep1.worst, rep2.worst)})
    return SuiteResult("axioms", count, passes, worst, failures)


def suite_thm62(seed: int = 0, count: int = 200) -> SuiteResult:
    """Weak commutant equals multiplier algebra on random systems."""
    passes = 0
    worst = 0.0
    failures = []
    for i, (spec, k, proj) in enumerate(_system_specs(seed, count)):
        sys = gen_system(spec, k, projections=proj)
        d = constrained_ideal(sys)
        obs = weak_commutant(sys.field_algebra, d)
        mult = multiplier_algebra(sys.field_algebra, d)
        eq, res = matspace.subspaces_equal(obs.space, mult.space)
        worst = max(worst, res)
        dims_exact = obs.dim_complex == mult.dim_complex
        if eq and dims_exact:
            passes += 1
        else:
            failures.append({"instance": i, "dims": [obs.dim_complex,
                                                     mult.dim_complex]})
    return SuiteResult("thm6.2", count, passes, worst, failures)


def suite_equivalence(seed: int = 0, count: int = 200) -> SuiteResult:
    """Associative versus Lie-Jordan reduction on random systems."""
    passes = 0
    worst = 0.0
    failures = []
    for i, (spec, k, proj) in enumerate(_system_specs(seed, count)):
        sys = gen_system(spec, k, projections=proj)
        cert = verify_equivalence(sys, rng_seed=seed + i)
        worst = max(worst, cert.clause_a_residual, cert.product_residual,
                    cert.bracket_residual, cert.norm_residual)
        if cert.passed:
            passes += 1
        else:
            failures.append({"instance": i, "certificate": cert.to_dict()})
    return SuiteResult("equivalence", count, passes, worst, failures)


def _pipeline_reduction(spec, n_constraints, projections):
    """An admissible (L, reduction) pair from the constraint pipeline.

    Uses the self-adjoint part of D as the reducing subalgebra whenever it
    is proper (the global unit stays outside); degenerate draws fall back to
    a generated block ideal or the zero ideal.
    """
    sys = gen_system(spec, n_constraints, projections=projections)
    from .core import ljb_algebra

    eye = np.eye(sys.n, dtype=complex)
    l_alg = ljb_algebra(sys.field_algebra.hermitian_part(), sys.params,
                        unit=eye)
    d = constrained_ideal(sys)
    j_sa = matspace.hermitian_part(d)
    if d.dim and not j_sa.member(eye)[0]:
        return l_alg, reduce_by_subalgebra(l_alg, j_sa), j_sa
    j = gen_ideal(spec)
    ok, _ = l_alg.carrier.contains(j)
    if not ok:
        j = matspace.zero_subspace(l_alg.carrier.ambient, hermitian=True)
    return l_alg, reduce_by_ideal(l_alg, j), j


def suite_states(seed: int = 0, count: int = 100,
                 samples: int = 10) -> SuiteResult:
    """State reduction/extension round trips on pipeline reductions."""
    passes = 0
    worst = 0.0
    failures = []
    for i, (spec, k, proj) in enumerate(_system_specs(seed, count, max_n=4)):
        try:
            l_alg, result, _ = _pipeline_reduction(spec, k, proj)
            cert = verify_state_correspondence(l_alg, result, samples=samples,
                                               rng_seed=seed + i)
            wd = verify_quotient_well_defined(result, trials=5,
                                              rng_seed=seed + i)
            worst = max(worst, cert.worst_roundtrip, cert.worst_equivalence)
            if cert.passed and wd.passed:
                passes += 1
            else:
                failures.append({"instance": i, "cert": cert.to_dict()})
        except LJError as exc:
            failures.append({"instance": i, "error": type(exc).__name__,
                             "message": str(exc)})
    return SuiteResult("states", count, passes, worst, failures)


def suite_gns(seed: int = 0, count: int = 100) -> SuiteResult:
    """GNS invariants on random (algebra, state) pairs, with purity checks."""
    passes = 0
    worst = 0.0
    failures = []
    for i, spec in enumerate(_algebra_specs(seed, count, max_n=4)):
        alg = gen_algebra(spec)
        cstar = complexify(alg)
        omega = gen_state(spec, alg)
        rep = gns(cstar, omega)
        worst = max(worst, max(rep.residuals.values()))
        ok = rep.passed
        if spec.profile == "full_matrix" and alg.n >= 1:
            eigs = np.linalg.eigvalsh(omega.rho)
            rank_one = int(np.sum(eigs > 1e-9)) == 1
            ok = ok and (is_pure(cstar, omega) == rank_one)
        if ok:
            passes += 1
        else:
            failures.append({"instance": i, "residuals": rep.to_dict()})
    return SuiteResult("gns", count, passes, worst, failures)


def suite_thm81(seed: int = 0, count: int = 50) -> SuiteResult:
    """Unitary equivalence of the two reduced GNS constructions."""
    passes = 0
    worst = 0.0
    failures = []
    for i, (spec, k, proj) in enumerate(_system_specs(seed, count, max_n=4)):
        try:
            l_alg, result, j = _pipeline_reduction(spec, k, proj)
            if result.quotient.dim == 0:
                passes += 1
                continue
            rng = np.random.default_rng([seed, i, 0x81])
            tilde = random_quotient_state(result, rng)
            pulled = StateFunctional.from_density(result.normalizer, tilde.rho)
            omega = extend_state(pulled, l_alg)
            tilde = reduce_state(omega, result)
            cert = reduced_gns_equivalence(complexify(l_alg), result, j,
                                           omega, tilde)
            worst = max(worst, max(cert.residuals.values(), default=0.0))
            if cert.passed:
                passes += 1
            else:
                failures.append({"instance": i, "cert": cert.to_dict()})
        except LJError as exc:
            failures.append({"instance": i, "error": type(exc).__name__,
                             "message": str(exc)})
    return SuiteResult("thm8.1", count, passes, worst, failures)


def suite_quotient_norm(seed: int = 0, count: int = 100) -> SuiteResult:
    """Structural quotient norm against the convex-infimum oracle."""
    from . import config

    passes = 0
    worst = 0.0
    failures = []
    rng = np.random.default_rng([seed, 0x42])
    for i, (spec, k, proj) in enumerate(_system_specs(seed, count, max_n=4)):
        l_alg, result, _ = _pipeline_reduction(spec, k, proj)
        a = result.normalizer.random_element(rng)
        structural = quotient_norm(result, a)
        oracle = quotient_norm_infimum(result, a)
        gap = abs(structural - oracle) / max(1.0, oracle)
        worst = max(worst, gap)
        if gap <= config.TOL.norm_agree:
            passes += 1
        else:
            failures.append({"instance": i, "structural": structural,
                             "oracle": oracle})
    return SuiteResult("quotient-norm", count, passes, worst, failures)


SUITES = {
    "axioms": suite_axioms,
    "thm6.2": suite_thm62,
    "equivalence": suite_equivalence,
    "states": suite_states,
    "gns": suite_gns,
    "thm8.1": suite_thm81,
    "quotient-norm": suite_quotient_norm,
}


def run_suite(name: str, seed: int = 0, count: int | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    if count is None:
        return SUITES[name](seed=seed)
    return SUITES[name](seed=seed, count=count)
