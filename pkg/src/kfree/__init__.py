"""Pure point diffraction of the k-free integers.

The k-free integers (no prime-power divisor p^k) diffract onto a dense set
of rational frequencies; this package evaluates the peak intensities in
closed form, the cumulative intensity near the origin with certified
truncation bounds, and the same quantities brute-force from sieved point
sets, so that the closed forms and the asymptotic scaling exponent 2 - 1/k
can be checked against each other numerically.
"""

from .arith import (
    CapacityError,
    SieveTables,
    ZetaValue,
    build_sieve,
    divisor_count,
    divisor_count_of_power,
    euler_phi,
    factorize,
    is_power_free,
    radical,
    sigma_of_radical_power,
    squarefree_count,
    two_param_totient,
    zeta,
    zeta_bracket,
)
from .asymptotics import (
    DivisorBoundReport,
    FitResult,
    FkBoundsReport,
    MuTailReport,
    PhiApproxReport,
    PhiIdentityReport,
    ScanTable,
    decade_envelope_constants,
    divisor_bound_threshold,
    dyadic,
    fit_loglog,
    random_phi_samples,
    scan,
    verify_fk_bounds,
    verify_mu_tail,
    verify_phi_approx,
    verify_phi_identity,
)
from .diffraction import (
    KFreeParams,
    SpectrumPoint,
    SupportWindow,
    ZValue,
    enumerate_support,
    f_k,
    f_k_lemma_form,
    intensity,
    inner_sum_collapsed,
    phi_sum_over_power_divisors,
    tail_bound,
    z_adaptive,
    z_grouped,
    z_naive,
)
from .directspace import (
    Patch,
    PairFrequencies,
    density,
    empirical_intensity,
    generate_patch,
    pair_frequencies,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "DivisorBoundReport",
    "FitResult",
    "FkBoundsReport",
    "KFreeParams",
    "MuTailReport",
    "Patch",
    "PairFrequencies",
    "PhiApproxReport",
    "PhiIdentityReport",
    "ScanTable",
    "SieveTables",
    "SpectrumPoint",
    "SupportWindow",
    "ZValue",
    "ZetaValue",
    "build_sieve",
    "decade_envelope_constants",
    "density",
    "divisor_bound_threshold",
    "divisor_count",
    "divisor_count_of_power",
    "dyadic",
    "empirical_intensity",
    "enumerate_support",
    "euler_phi",
    "f_k",
    "f_k_lemma_form",
    "factorize",
    "fit_loglog",
    "generate_patch",
    "inner_sum_collapsed",
    "intensity",
    "is_power_free",
    "pair_frequencies",
    "phi_sum_over_power_divisors",
    "radical",
    "random_phi_samples",
    "scan",
    "sigma_of_radical_power",
    "squarefree_count",
    "tail_bound",
    "two_param_totient",
    "verify_fk_bounds",
    "verify_mu_tail",
    "verify_phi_approx",
    "verify_phi_identity",
    "z_adaptive",
    "z_grouped",
    "z_naive",
    "zeta",
    "zeta_bracket",
]
