import os

DEFAULT_REL_TOL = 1e-9
ENV_TOL = "POLYFOURIER_TOL"


def rel_tol():
    """Global relative tolerance, overridable through ``POLYFOURIER_TOL``."""
    raw = os.environ.get(ENV_TOL)
    if raw is None or not raw.strip():
        return DEFAULT_REL_TOL
    value = float(raw)
    if not value > 0:
        raise ValueError(f"{ENV_TOL} must be positive, got {raw!r}")
    return value
