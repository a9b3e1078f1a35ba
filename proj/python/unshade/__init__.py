"""Uneven-illumination restoration on grayscale images.

The heavy lifting lives in the compiled extension; this package re-exports
its functions. All grid operations take 2-D float64 numpy arrays plus an
``h`` keyword for the mesh spacing (numpy arrays do not carry one).
"""

from unshade._core import (
    DEFAULT_MESH_SPACING,
    __version__,
    apply_shading,
    auto_omega,
    compare,
    cost_field,
    divergence,
    estimate_lambda_max,
    gradient,
    laplacian,
    load_luminance,
    log_potential,
    momentum,
    mse,
    psnr,
    restore,
    save_gray,
    shading_mask,
    solve_direct,
    solve_richardson,
    ssim,
    update_illumination,
)

__all__ = [
    "DEFAULT_MESH_SPACING",
    "__version__",
    "apply_shading",
    "auto_omega",
    "compare",
    "cost_field",
    "divergence",
    "estimate_lambda_max",
    "gradient",
    "laplacian",
    "load_luminance",
    "log_potential",
    "momentum",
    "mse",
    "psnr",
    "restore",
    "save_gray",
    "shading_mask",
    "solve_direct",
    "solve_richardson",
    "ssim",
    "update_illumination",
]
