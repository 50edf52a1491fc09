import json
import logging
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from tools.domains import AnnulusField, NormalMapDomain
from tools.linefield import dump_field, ph_audit, tangency_check
from tools.serrin import OverdeterminedSpec, jacobian_residuals, theorem1_audit
from tools.settings import Settings, get_settings
from tools.specs import load_curve

logger = logging.getLogger(__name__)

GRID = (128, 17)


def _check(value: float, tolerance: float) -> dict:
    return {"value": value, "tolerance": tolerance, "passed": bool(value <= tolerance)}


def annulus_checks(u: AnnulusField, settings: Settings) -> dict:
    """Residuals of u(Ψ(s, t)) = 1 - t² on the (s, t) grid against the closed forms in tκ."""
    domain = u.domain
    S, TT, pts = domain.grid(*GRID)
    kappa = domain.curve.curvature(S)
    d = u.derivatives(pts[:, 0], pts[:, 1])
    q = 1 - TT * kappa
    lap = d.uxx + d.uyy
    det = d.uxx * d.uyy - d.uxy ** 2
    edge = np.isclose(np.abs(TT), domain.halfwidth)
    grad = np.hypot(d.ux, d.uy)
    residual, _ = jacobian_residuals(d)
    return {
        "boundary_value": _check(float(np.max(np.abs(d.value[edge]))), 1e-10),
        "boundary_gradient": _check(float(np.max(np.abs(grad[edge] - 2))), 1e-8),
        "gradient_level": _check(float(np.max(np.abs(grad - 2 * np.abs(TT)))), 1e-8),
        "laplacian": _check(float(np.max(np.abs(lap - (-2 + 2 * TT * kappa / q)))), 1e-8),
        "hessian_det": _check(float(np.max(np.abs(det + 4 * TT * kappa / q))), 1e-8),
        "elimination": _check(float(np.max(np.abs(det + 2 * lap + 4))), 1e-8),
        "jacobian": _check(float(np.max(np.abs(residual))), settings.pde_residual_tolerance),
    }


def run_annulus_pipeline(curve: str, report: Optional[str] = None, dump: Optional[str] = None,
                         rescale: bool = False, settings: Optional[Settings] = None) -> Tuple[int, dict]:
    """Build the band around a curve, check the annulus field on it and audit it."""
    settings = settings or get_settings()
    domain = NormalMapDomain(load_curve(curve, settings), rescale=rescale, settings=settings)
    u = AnnulusField(domain)
    logger.info("band built: max|κ| = %.6g, certified = %s", domain.max_abs_kappa, domain.certified)

    checks = annulus_checks(u, settings)
    tangency = tangency_check(u, domain, settings=settings)
    ph = ph_audit(u, domain, settings)
    verdict = theorem1_audit(OverdeterminedSpec(u, domain, 2), settings)
    payload = {
        "domain": domain.describe(),
        "grid": list(GRID),
        "checks": checks,
        "tangency": tangency.to_dict(),
        "ph": ph.to_dict(),
        **verdict.to_dict(),
    }
    if dump:
        rows = dump_field(u, domain.grid(*GRID)[2], dump)
        payload["dump"] = {"path": str(dump), "rows": rows}
    if report:
        Path(report).write_text(json.dumps(payload, sort_keys=True, indent=2))
    ok = all(c["passed"] for c in checks.values()) and tangency.passed and ph.verdict == "consistent"
    return (0 if ok else 2), payload
