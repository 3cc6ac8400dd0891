"""Validation models for JSON inputs.

Every model rejects unknown keys, and ``usage_error`` turns a pydantic
``ValidationError`` into a ``UsageError`` naming the offending field.
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .circuit import CircuitParams
from .errors import UsageError
from .gadget import N_LOCAL, GadgetSpec
from .parity import LogicalProblem

Model = TypeVar("Model", bound=BaseModel)


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class GadgetSpecModel(StrictModel):
    kind: Literal["n-local", "three-local-single-ancilla", "symmetric"] = N_LOCAL
    N: int = Field(ge=2)
    J_N: float = 0.0
    J_a: float = Field(default=1.0, gt=0)
    q_0: float = 0.5
    f: Optional[List[float]] = None

    def to_spec(self) -> GadgetSpec:
        return GadgetSpec(N=self.N, J_N=self.J_N, J_a=self.J_a, q_0=self.q_0, kind=self.kind,
                          f=tuple(self.f) if self.f is not None else None)


class CircuitParamsModel(StrictModel):
    L_c: float = Field(gt=0)
    L: List[float] = Field(min_length=2)
    M: List[float] = Field(min_length=2)
    E_c: float
    E: List[float] = Field(min_length=2)
    phi_cx: float = 0.0

    def to_params(self) -> CircuitParams:
        return CircuitParams(self.L_c, tuple(self.L), tuple(self.M), self.E_c, tuple(self.E), self.phi_cx)


class LogicalProblemModel(StrictModel):
    M: int = Field(ge=3)
    couplings: List[Tuple[int, int, float]] = []

    def to_problem(self) -> LogicalProblem:
        return LogicalProblem(self.M, tuple(self.couplings))


def usage_error(exc: ValidationError, prefix: str = "") -> UsageError:
    first = exc.errors()[0]
    where = ".".join(str(part) for part in first["loc"]) or "document"
    return UsageError(f"{prefix}{where}", first["msg"])


def load_json(path: Union[str, Path]) -> Any:
    try:
        with Path(path).open("r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise UsageError(str(path), f"cannot read: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(str(path), f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def parse_document(model: Type[Model], document: Any, prefix: str = "") -> Model:
    try:
        return model.model_validate(document)
    except ValidationError as exc:
        raise usage_error(exc, prefix) from exc


def read_document(model: Type[Model], path: Union[str, Path]) -> Model:
    return parse_document(model, load_json(path), prefix=f"{path}: ")


def load_config(path: Union[str, Path], known: Dict[str, Any]) -> Dict[str, Any]:
    """A CLI config file: a JSON object whose keys are option names of the command."""
    document = load_json(path)
    if not isinstance(document, dict):
        raise UsageError(str(path), "config file must hold a JSON object")
    for key in document:
        if key not in known:
            raise UsageError(key, f"unknown option in config file {path}")
    return document
