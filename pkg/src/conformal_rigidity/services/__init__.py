"""Solvers, chain assembly, regression corpus and report writers."""

from conformal_rigidity.services.chain import (
    EQUALITY_THEOREMS,
    compute_chain,
    detect_equalities,
    green_modulus_defect,
    require_ordered,
    rigidity_probe,
)
from conformal_rigidity.services.cndim import (
    azukawa_volume,
    ball_bergman,
    bergman_at,
    delta_bounds_check,
    polydisk_bergman,
)
from conformal_rigidity.services.corpus import (
    CorpusRun,
    corpus_regression,
    load_corpus,
    run_corpus,
)
from conformal_rigidity.services.green import (
    circle_mean,
    delta_capacity_check,
    green_gradient,
    green_value,
    log_capacity,
    solve_green,
)
from conformal_rigidity.services.kernels import (
    ab_extremal_eval,
    ahlfors_beurling_bound,
    ahlfors_map_from_szego,
    analytic_capacity,
    annulus_bergman,
    annulus_szego,
    bergman_kernel,
    evaluate_witness,
    higher_bergman,
    higher_order_bounds,
    kernel_convergence,
    szego_kernel,
    szego_stability_sweep,
    witness_norm,
)
from conformal_rigidity.services.sublevel import (
    bz_sweep,
    coarea_flux,
    level_curves,
    sublevel_volume,
)

__all__ = [
    # Green
    "circle_mean",
    "delta_capacity_check",
    "green_gradient",
    "green_value",
    "log_capacity",
    "solve_green",
    # Sublevel sets
    "bz_sweep",
    "coarea_flux",
    "level_curves",
    "sublevel_volume",
    # Kernels
    "ab_extremal_eval",
    "ahlfors_beurling_bound",
    "ahlfors_map_from_szego",
    "analytic_capacity",
    "annulus_bergman",
    "annulus_szego",
    "bergman_kernel",
    "evaluate_witness",
    "higher_bergman",
    "higher_order_bounds",
    "kernel_convergence",
    "szego_kernel",
    "szego_stability_sweep",
    "witness_norm",
    # Chain
    "EQUALITY_THEOREMS",
    "compute_chain",
    "detect_equalities",
    "green_modulus_defect",
    "require_ordered",
    "rigidity_probe",
    # C^n
    "azukawa_volume",
    "ball_bergman",
    "bergman_at",
    "delta_bounds_check",
    "polydisk_bergman",
    # Corpus
    "CorpusRun",
    "corpus_regression",
    "load_corpus",
    "run_corpus",
]
