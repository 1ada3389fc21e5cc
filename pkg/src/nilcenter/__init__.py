"""Center problem at nilpotent singular points of three-dimensional systems.

The package decides, as far as exact computation allows, whether the origin
of

    x' = y + P(x, y, z),  y' = Q(x, y, z),  z' = -lambda z + R(x, y, z)

is a center or a focus for the flow restricted to the local center
manifold.  Everything symbolic is exact: coefficients are rational
functions of the parameters, manifolds and integrals are computed degree
by degree with their defining identities rechecked, and every claim either
carries a certificate or states its side conditions.

Main entry points:

- `parse_system` / `SystemModel`: the input model;
- `cm_jet`, `restrict`, `restrict_exact`: center-manifold reduction;
- `andreev_data`, `classify_monodromy`: monodromy of the restriction;
- `omega_series`, `center_verdict`: obstructions and the decision;
- `normal_form`: resonant normal form with an exact conjugacy certificate;
- `displacement`, `v1_check`: numeric corroboration;
- the `nilcenter` command line tool.
"""

from .center_manifold import (HamiltonianResult, InvariantSurfaceResult,
                              cm_jet, exact_cm_candidate,
                              hamiltonian_reconstruct, invariance_defect,
                              invariant_surface_check, restrict,
                              restrict_exact, reversibility_check)
from .monodromy import (FLAT, AndreevData, MonodromyVerdict, SignedCondition,
                        andreev_data, classify_monodromy,
                        quadratic_frame_condition)
from .normal_form import (NormalFormResult, PatternReport, conjugacy_residual,
                          integrability_pattern, normal_form)
from .numerics import (DisplacementResult, DomainError, GenTrig,
                       MultiplierEstimate, NumericsError, ToleranceError,
                       displacement, gen_trig, moment_closed_form, period,
                       v1_check)
from .obstruction import (CenterVerdict, ObstructionSeries, beta_shortcut,
                          center_verdict, check_first_integral, omega_series)
from .operators import (LinearPartOperator, TransportSolution, solve_shifted,
                        solve_transport, transport, transport_shifted)
from .rational import Coef, PPoly, coef
from .series import (Jet, OrderError, Poly, divide_single, implicit_solve,
                     jet_exp, monomials)
from .sysio import (FrameError, JetBoundError, ParseError, PlanarSystem,
                    SideCondition, SideConditionSet, SystemModel,
                    ValidationError, bring_to_nilpotent_frame, mat_inv,
                    mat_vec, parse_assumption, parse_expression,
                    parse_numeric_bindings, parse_system, print_system,
                    substitute_params, translate_equilibrium)

__version__ = "0.1.0"

__all__ = [
    "AndreevData", "CenterVerdict", "Coef", "DisplacementResult",
    "DomainError", "FLAT", "FrameError", "GenTrig", "HamiltonianResult",
    "InvariantSurfaceResult", "Jet", "JetBoundError", "LinearPartOperator",
    "MonodromyVerdict", "MultiplierEstimate", "NormalFormResult",
    "NumericsError", "ObstructionSeries", "OrderError", "PPoly",
    "ParseError", "PatternReport", "PlanarSystem", "Poly", "SideCondition",
    "SideConditionSet", "SignedCondition", "SystemModel", "ToleranceError",
    "TransportSolution", "ValidationError", "andreev_data", "beta_shortcut",
    "bring_to_nilpotent_frame", "center_verdict", "check_first_integral",
    "classify_monodromy", "cm_jet", "coef", "conjugacy_residual",
    "displacement", "divide_single", "exact_cm_candidate", "gen_trig",
    "hamiltonian_reconstruct", "implicit_solve", "integrability_pattern",
    "invariance_defect", "invariant_surface_check", "jet_exp", "mat_inv",
    "mat_vec", "moment_closed_form", "monomials", "normal_form",
    "omega_series", "parse_assumption", "parse_expression",
    "parse_numeric_bindings", "parse_system", "period", "print_system",
    "quadratic_frame_condition", "restrict", "restrict_exact",
    "reversibility_check", "solve_shifted", "solve_transport",
    "substitute_params", "transport", "transport_shifted",
    "translate_equilibrium", "v1_check",
]
