"""JSON input files: fields, curves, bump disks and the --domain option."""
import json
from fractions import Fraction
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, ValidationError, model_validator

from tools.algebra import BiPoly, as_rational
from tools.domains import (AnnulusField, CurveDomain, DiskDomain, Domain, FourierCurve,
                           NormalMapDomain)
from tools.errors import InputError
from tools.fields import BumpField, Disk, PolyField, RadialLinearField, RadialProfile, ScalarField
from tools.settings import Settings, get_settings

Rational = Annotated[Fraction, BeforeValidator(as_rational)]


class _Model(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, extra="forbid")


class CurveModel(_Model):
    x_cos: List[Rational] = []
    x_sin: List[Rational] = []
    y_cos: List[Rational] = []
    y_sin: List[Rational] = []

    def build(self, settings: Optional[Settings] = None) -> FourierCurve:
        return FourierCurve(self.x_cos, self.x_sin, self.y_cos, self.y_sin, settings=settings)


class DiskModel(_Model):
    center: List[Rational] = Field(min_length=2, max_length=2)
    radius: Rational


class PolyFieldModel(_Model):
    type: Literal["poly"] = "poly"
    terms: list

    def build(self, settings: Settings) -> ScalarField:
        return PolyField(BiPoly.from_json({"terms": self.terms}))


class BumpFieldModel(_Model):
    type: Literal["bump"] = "bump"
    disks: List[DiskModel] = Field(min_length=1)

    def build(self, settings: Settings, margin: float = 0.0) -> BumpField:
        return BumpField([Disk((float(d.center[0]), float(d.center[1])), float(d.radius)) for d in self.disks],
                         margin=margin)


class FamilyModel(_Model):
    kind: Literal["linear", "quadratic"]
    t: Optional[Rational] = None
    t1: Optional[Rational] = None
    t2: Optional[Rational] = None

    @model_validator(mode="after")
    def _parameters(self):
        if self.kind == "linear" and self.t is None:
            raise ValueError("linear family needs t")
        if self.kind == "quadratic" and (self.t1 is None or self.t2 is None):
            raise ValueError("quadratic family needs t1 and t2")
        return self


class RadialLinearModel(_Model):
    type: Literal["radial_linear"] = "radial_linear"
    a: Rational = Fraction(0)
    b: Rational = Fraction(0)
    c0: Rational = Fraction(0)
    profile: Optional[List[Rational]] = None
    family: Optional[FamilyModel] = None

    @model_validator(mode="after")
    def _one_profile(self):
        if (self.profile is None) == (self.family is None):
            raise ValueError("give exactly one of profile or family")
        return self

    def build(self, settings: Settings) -> RadialLinearField:
        if self.family is None:
            profile = RadialProfile(self.profile)
        elif self.family.kind == "linear":
            profile = RadialProfile.linear(self.c0, self.family.t)
        else:
            profile = RadialProfile.quadratic(self.family.t1, self.family.t2)
        return RadialLinearField(self.a, self.b, self.c0, profile)


class AnnulusModel(_Model):
    type: Literal["annulus"] = "annulus"
    curve: CurveModel
    rescale: bool = False

    def build(self, settings: Settings) -> AnnulusField:
        return AnnulusField(NormalMapDomain(self.curve.build(settings), rescale=self.rescale, settings=settings))


FieldModel = Annotated[Union[PolyFieldModel, BumpFieldModel, RadialLinearModel, AnnulusModel],
                       Field(discriminator="type")]


class _FieldFile(BaseModel):
    field: FieldModel


def read_json(source: Union[str, Path, dict]) -> dict:
    if isinstance(source, dict):
        return source
    try:
        return json.loads(Path(source).read_text())
    except OSError as e:
        raise InputError(f"cannot read {source}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{source} is not valid JSON: {e}") from e


def _validation_message(e: ValidationError) -> str:
    first = e.errors()[0]
    where = ".".join(str(p) for p in first["loc"]) or "input"
    return f"{where}: {first['msg']}"


def parse_field_model(source: Union[str, Path, dict]):
    data = read_json(source)
    if isinstance(data, dict) and "type" not in data and "terms" in data:
        data = {"type": "poly", **data}
    try:
        return _FieldFile(field=data).field
    except ValidationError as e:
        raise InputError(f"invalid field spec: {_validation_message(e)}") from e


def load_field(source: Union[str, Path, dict], settings: Optional[Settings] = None) -> ScalarField:
    settings = settings or get_settings()
    return parse_field_model(source).build(settings)


def load_bump_disks(source: Union[str, Path, dict]) -> BumpFieldModel:
    data = read_json(source)
    if isinstance(data, list):
        data = {"disks": data}
    try:
        return BumpFieldModel(**{"type": "bump", **data})
    except (ValidationError, TypeError) as e:
        msg = _validation_message(e) if isinstance(e, ValidationError) else str(e)
        raise InputError(f"invalid disk list: {msg}") from e


def load_curve(source: Union[str, Path, dict], settings: Optional[Settings] = None) -> FourierCurve:
    try:
        model = CurveModel(**read_json(source))
    except ValidationError as e:
        raise InputError(f"invalid curve spec: {_validation_message(e)}") from e
    return model.build(settings or get_settings())


def parse_point(text: str):
    """"X,Y" with rational-or-decimal coordinates."""
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"expected X,Y but got {text!r}")
    return as_rational(parts[0]), as_rational(parts[1])


def parse_domain(option: str, settings: Optional[Settings] = None) -> Domain:
    """disk:R | disk:R,X,Y | curve:c.json | band:c.json."""
    settings = settings or get_settings()
    kind, _, arg = option.partition(":")
    if not arg:
        raise InputError(f"domain must look like kind:argument, got {option!r}")
    if kind == "disk":
        parts = arg.split(",")
        if len(parts) == 1:
            return DiskDomain(as_rational(parts[0]))
        if len(parts) == 3:
            return DiskDomain(as_rational(parts[0]), (as_rational(parts[1]), as_rational(parts[2])))
        raise InputError(f"disk domain takes R or R,X,Y, got {arg!r}")
    if kind == "curve":
        return CurveDomain(load_curve(arg, settings))
    if kind == "band":
        return NormalMapDomain(load_curve(arg, settings), settings=settings)
    raise InputError(f"unknown domain kind {kind!r}")
