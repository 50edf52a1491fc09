import logging
from typing import Dict, Optional, Tuple

from tools.algebra import as_rational, format_rational
from tools.errors import InputError
from tools.fields import RadialLinearField
from tools.serrin import RadialFamily, nodal_line_check, ode_factor_check, radial_ode_residual
from tools.settings import Settings, get_settings

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-12


def parse_params(text: str) -> Dict[str, str]:
    """"t=3/5,c0=0" into {"t": "3/5", "c0": "0"}."""
    out = {}
    for item in filter(None, (p.strip() for p in text.split(","))):
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise InputError(f"expected key=value in --params, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def run_ode_pipeline(family: str, params: str, settings: Optional[Settings] = None) -> Tuple[int, dict]:
    """The two radial profile families left by the boundary ODE, checked numerically and exactly."""
    settings = settings or get_settings()
    values = parse_params(params)
    c0 = as_rational(values.pop("c0", "0"))
    try:
        if family == "linear":
            fam = RadialFamily.linear(values.pop("t"))
        elif family == "quadratic":
            fam = RadialFamily.quadratic(values.pop("t1"), values.pop("t2"))
        else:
            raise InputError(f"family must be linear or quadratic, got {family!r}")
    except KeyError as e:
        raise InputError(f"{family} family needs parameter {e.args[0]}") from e
    if values:
        raise InputError(f"unknown parameters {sorted(values)}")
    c2 = fam.c_squared(c0)
    residual = radial_ode_residual(fam, c0)
    exact = ode_factor_check(fam, c0)
    payload = {**exact, "c_squared": format_rational(c2), "residual": residual,
               "residual_tolerance": RESIDUAL_TOLERANCE}
    if family == "linear":
        u = RadialLinearField(1, 0, c0, fam.profile(c0))
        payload["nodal"] = nodal_line_check(u).to_dict()
    ok = residual <= RESIDUAL_TOLERANCE and exact["factor_vanishes"] and exact["equation_vanishes"]
    logger.info("%s family residual %.3g", family, residual)
    return (0 if ok else 2), payload
