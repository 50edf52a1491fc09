import json
import logging
import sys
from typing import Optional, Sequence

import click

from orchestrator.router import dispatch
from tools.errors import HessfieldError, VerdictError
from tools.settings import Settings, get_settings

logger = logging.getLogger("hessfield")


def _emit(ctx: click.Context, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2)
    target = ctx.obj.get("output")
    if target:
        with open(target, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


def _run(ctx: click.Context, command: str, **kwargs) -> None:
    settings: Settings = ctx.obj["settings"]
    try:
        code, payload = dispatch(command, settings=settings, **kwargs)
    except VerdictError as e:
        payload = {"conclusion": {"tag": "violation", "error": type(e).__name__, "message": str(e)}}
        if e.report is not None:
            payload["conclusion"]["report"] = e.report.to_dict()
        code = 2
    except HessfieldError as e:
        click.echo(f"error: {e}", err=True)
        ctx.exit(1)
    _emit(ctx, payload)
    ctx.exit(code)


@click.group()
@click.option("--log-level", default=None, help="Override HESSFIELD_LOG_LEVEL.",
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False))
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Write the JSON payload here.")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str], output: Optional[str]):
    """Exact and numeric checks for the Hessian operator and the overdetermined torsion problem."""
    settings = get_settings()
    if log_level:
        settings = settings.model_copy(update={"log_level": log_level.upper()})
    logging.basicConfig(stream=sys.stderr, level=settings.log_level,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s", force=True)
    ctx.obj = {"settings": settings, "output": output}


@cli.command()
@click.option("--field", "field_path", required=True, help="Polynomial field JSON.")
@click.option("--point", required=True, help="Rational point X,Y.")
@click.pass_context
def classify(ctx, field_path, point):
    """Classify a point of the degenerate set U."""
    _run(ctx, "classify", field=field_path, point=point)


@cli.command()
@click.option("--field", "field_path", required=True)
@click.option("--center", required=True, help="X,Y")
@click.option("--radius", type=float, required=True)
@click.option("--boundary", is_flag=True, help="Half-index at a boundary point.")
@click.option("--tangent", default=None, help="Boundary unit tangent TX,TY.")
@click.pass_context
def index(ctx, field_path, center, radius, boundary, tangent):
    """Index of the eigenline field at an isolated singularity."""
    _run(ctx, "index", field=field_path, center=center, radius=radius, boundary=boundary, tangent=tangent)


@cli.command()
@click.option("--field", "field_path", required=True)
@click.option("--domain", required=True, help="disk:R | disk:R,X,Y | curve:c.json | band:c.json")
@click.option("--c", "c", required=True, help="Boundary constant |Du| on ∂Ω.")
@click.pass_context
def audit(ctx, field_path, domain, c):
    """Audit an overdetermined instance and report the conclusion it reaches."""
    _run(ctx, "audit", field=field_path, domain=domain, c=c)


@cli.command()
@click.option("--curve", required=True, help="Fourier curve JSON.")
@click.option("--report", default=None, type=click.Path(dir_okay=False))
@click.option("--dump-field", "dump", default=None, type=click.Path(dir_okay=False))
@click.option("--rescale", is_flag=True, help="Scale the curve to max|κ| = curvature_target first.")
@click.pass_context
def annulus(ctx, curve, report, dump, rescale):
    """Check the band solution u = 1 - t² around a closed curve."""
    _run(ctx, "annulus", curve=curve, report=report, dump=dump, rescale=rescale)


@cli.command()
@click.option("--disks", required=True, help="Disk list JSON.")
@click.option("--domain", required=True)
@click.option("--margin", type=float, default=None)
@click.pass_context
def bump(ctx, disks, domain, margin):
    """Check the flat-bump counterexample with c = 0."""
    _run(ctx, "bump", disks=disks, domain=domain, margin=margin)


@cli.command()
@click.option("--max-n", type=int, default=4, show_default=True)
@click.option("--max-m", type=int, default=8, show_default=True)
@click.option("--trials", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.pass_context
def identities(ctx, max_n, max_m, trials, seed):
    """Exact identity sweep over random rational data."""
    _run(ctx, "identities", max_n=max_n, max_m=max_m, trials=trials, seed=seed)


@cli.command()
@click.option("--family", type=click.Choice(["linear", "quadratic"]), required=True)
@click.option("--params", required=True, help='"t=3/5,c0=0" or "t1=1,t2=-1,c0=0"')
@click.pass_context
def ode(ctx, family, params):
    """Radial profile families of the boundary ODE."""
    _run(ctx, "ode", family=family, params=params)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point returning the exit code instead of raising SystemExit."""
    try:
        result = cli.main(args=list(argv) if argv is not None else None, standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return 1
    except click.exceptions.Abort:
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(run())
