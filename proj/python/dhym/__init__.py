from ._core import (
    InputError,
    InvariantViolation,
    argument_pairing_test,
    boundary_solve,
    c_subsolution_test,
    central_charge,
    f0,
    form_positivity_test,
    relative_eigenvalues,
    run_continuity,
    solve,
    stability_check,
    surface_criterion,
    theta,
    theta_field,
    boundary_report,
)

__all__ = [
    "InputError",
    "InvariantViolation",
    "argument_pairing_test",
    "boundary_solve",
    "c_subsolution_test",
    "central_charge",
    "f0",
    "form_positivity_test",
    "relative_eigenvalues",
    "run_continuity",
    "solve",
    "stability_check",
    "surface_criterion",
    "theta",
    "theta_field",
    "boundary_report",
]
