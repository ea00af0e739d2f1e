"""Report schemas and writers for CSV and JSON output."""
import csv
import hashlib
import io
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Literal, Optional, Sequence, TextIO, Union

from pydantic import BaseModel

from duopoly import __version__
from duopoly.equilibria.critical import EquilibriumReport, JacobianData
from duopoly.liapunov.rionero import LiapunovBundle
from duopoly.model.core import ModelParams

logger = logging.getLogger(__name__)

Scalar = Union[bool, int, float, str, None]
Status = Literal["pass", "fail", "uncertified"]

FLOAT_FORMAT = "%.17g"


class RunHeader(BaseModel):
    command: str
    version: str = __version__
    config_sha256: str
    seed: int
    params: Dict[str, float] = {}


class JacobianOut(BaseModel):
    a11: float
    a12: float
    a21: float
    a22: float
    I0: float
    A0: float
    disc: float
    lambda1: Optional[float] = None
    lambda2: Optional[float] = None

    @classmethod
    def from_data(cls, j: JacobianData) -> "JacobianOut":
        return cls(
            a11=float(j.a11), a12=float(j.a12), a21=float(j.a21), a22=float(j.a22),
            I0=float(j.I0), A0=float(j.A0), disc=float(j.disc),
            lambda1=j.lambda1, lambda2=j.lambda2,
        )


class EquilibriumOut(BaseModel):
    kind: str
    u: Optional[float] = None
    v: Optional[float] = None
    admissible: bool
    degenerate: bool
    classification: Optional[str] = None
    jacobian: Optional[JacobianOut] = None

    @classmethod
    def from_report(cls, r: EquilibriumReport) -> "EquilibriumOut":
        return cls(
            kind=r.kind.value,
            u=None if r.point is None else float(r.point.u),
            v=None if r.point is None else float(r.point.v),
            admissible=r.admissible,
            degenerate=r.degenerate,
            classification=None if r.classification is None else r.classification.value,
            jacobian=None if r.jacobian is None else JacobianOut.from_data(r.jacobian),
        )


class BundleOut(BaseModel):
    alpha1: float
    alpha2: float
    alpha3: float
    m1: float
    m2: float
    m3: float
    m4: float
    M: float
    delta1: float
    delta2: float
    h1: float
    h2: float
    radius_sq: float
    certified_radius_sq: float
    global_ok: bool
    alpha3_flagged: bool

    @classmethod
    def from_bundle(cls, b: LiapunovBundle) -> "BundleOut":
        fb = b.as_float()
        return cls(**{name: getattr(fb, name) for name in cls.model_fields})


class EquilibriaReportOut(BaseModel):
    header: RunHeader
    equilibria: List[EquilibriumOut]
    bundle: Optional[BundleOut] = None


class CheckOut(BaseModel):
    name: str
    status: Status
    measured: Dict[str, Scalar] = {}
    tolerance: Optional[float] = None
    detail: str = ""


class CertificationReport(BaseModel):
    header: RunHeader
    evidence: str = "floating-point numerical evidence"
    passed: bool
    checks: List[CheckOut]


class TrajectoryOut(BaseModel):
    header: RunHeader
    columns: List[str]
    rows: List[List[float]]
    events: List[Dict[str, Scalar]] = []


class EventsOut(BaseModel):
    """Sidecar written next to a simulated trajectory."""

    header: RunHeader
    method: str
    dt: float
    samples: int
    events: List[Dict[str, Scalar]] = []


class SweepOut(BaseModel):
    header: RunHeader
    columns: List[str]
    rows: List[List[Scalar]]


def config_hash(canonical: str) -> str:
    """SHA-256 hex digest of the canonical configuration text."""
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def params_header(p: Optional[ModelParams]) -> Dict[str, float]:
    return {} if p is None else {k: float(v) for k, v in p.as_dict().items()}


def format_cell(value: Scalar) -> str:
    """
    Text for one CSV cell.

    Args:
        value: None, bool, int, float or str

    Returns:
        "" for None, "true"/"false" for booleans, floats at 17 significant digits
        so they read back bit-identical, anything else through str()
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    return str(value)


def write_csv(stream: TextIO, columns: Sequence[str], rows: Iterable[Sequence[Scalar]]):
    """
    Write a header row and then every row, each cell through ``format_cell``.

    Args:
        stream: Text stream to write to
        columns: Header names
        rows: Row values in column order
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(cell) for cell in row])


def csv_text(columns: Sequence[str], rows: Iterable[Sequence[Scalar]]) -> str:
    """CSV document as a string; see ``write_csv``."""
    buffer = io.StringIO()
    write_csv(buffer, columns, rows)
    return buffer.getvalue()


def dump_json(model: BaseModel) -> str:
    return model.model_dump_json(indent=2) + "\n"


def events_path(out: Path) -> Path:
    """Sidecar location ``<out>.events.json``."""
    return out.with_name(out.name + ".events.json")


def emit(text: str, out: Optional[Path], stream: TextIO):
    """Write ``text`` to ``out`` when given, otherwise to ``stream``."""
    if out is None:
        stream.write(text)
        return
    out.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {out}")
