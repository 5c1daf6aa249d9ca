"""Generalized inverses with residual certificates."""

from ._core import (
    GeninvError,
    bc_inverse,
    bott_duffin,
    derivative_check_mp,
    gap,
    inverse_along,
    left_regular,
    moore_penrose,
    outer_prescribed,
    perturb,
    pinv,
    right_regular,
    run,
)

__all__ = [
    "GeninvError",
    "bc_inverse",
    "bott_duffin",
    "derivative_check_mp",
    "gap",
    "inverse_along",
    "left_regular",
    "moore_penrose",
    "outer_prescribed",
    "perturb",
    "pinv",
    "right_regular",
    "run",
]
