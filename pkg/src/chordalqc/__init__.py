"""Numerics for boundary-vanishing Schwarzian norms on the right half-plane:
jet arithmetic, a conformal-map catalog, strip-norm functionals, chordal
Loewner evolution, closed-form quasiconformal extensions with verified
dilatations, and Carleson box scans."""

from .errors import (
    BranchCutError,
    DegenerateSampleError,
    DomainError,
    EvaluationError,
    HorizonError,
    QuadratureError,
)
from .jets import Jet, jet_compose, jet_constant, jet_div, jet_elementary, jet_mul, lift_variable
from .maps import (
    ConformalMap,
    cayley,
    compose,
    counterexample_f,
    eval_jet,
    half_strip_g,
    identity,
    moebius,
    parse_complex,
    parse_map_spec,
    perturbed_identity,
    phi_map,
    square_map,
)
from .schwarz import (
    NormProfile,
    StripGrid,
    horodisk_ratio,
    norm_profile,
    pre_schwarzian,
    schwarzian,
    schwarzian_deriv,
)
from .loewner import (
    EvolutionState,
    HerglotzField,
    HorizonResult,
    evolve,
    evolve_trace,
    family_derivatives,
    family_ht,
    herglotz_p,
    make_field,
    pde_residual,
    tau0_scan,
)
from .extension import (
    DilatationSample,
    QCReport,
    extend,
    mirror_strip_points,
    mu_formula,
    qc_report,
    trace_extend,
    wirtinger_mu,
)
from .carleson import (
    BigBoxSplit,
    CarlesonReport,
    Density,
    bigbox_decomposition,
    box_ratio,
    carleson_scan,
    composite_density,
    composite_mu_tilde,
    mu_density,
    vmoa_density,
    weighted_sup_scan,
)

__version__ = "0.1.0"
