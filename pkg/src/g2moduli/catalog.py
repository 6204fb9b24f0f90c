"""Named algebras, their reference forms and the expected values.

The default catalog ships as ``data/catalog.json``. Forms are stored as text
in the notation grammar so the golden data stays reviewable by eye.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

from .exterior import KForm
from .g2 import build_psi_su3
from .liealg import JacobiError, LieAlgebra
from .notation import ParseError, parse_form, parse_salamon

__all__ = [
    "CatalogEntry",
    "CatalogError",
    "Expected",
    "QUANTITIES",
    "default_catalog_text",
    "get_entry",
    "load_catalog",
    "parse_catalog",
    "serialize_catalog",
]

SCHEMA_VERSION = 1

QUANTITIES = (
    "z3", "z4", "dim_aut", "stab_closed", "stab_coclosed", "stab_perturbed",
    "b3", "moduli_closed", "moduli_coclosed", "nilpotency_step",
)

# a source tag names a table, the worked example, the solvable remark or a
# published perturbation
SOURCE_RE = re.compile(r"^(Table [1-9](; Table [1-9])*|Example 137A|Remark solvable|Perturbation \S+)$")

_ENTRY_KEYS = ("name", "label", "salamon", "tables", "unavailable", "closed_form", "coclosed",
               "published_perturbation", "expected")


class CatalogError(ValueError):
    def __init__(self, message: str, entry: str | None = None, field_name: str | None = None):
        self.entry = entry
        self.field = field_name
        where = ""
        if entry is not None:
            where = f"entry {entry!r}" + (f", field {field_name!r}" if field_name else "") + ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class Expected:
    value: int
    source: str
    relation: str = "eq"  # "le" when the published value is only an upper bound

    def to_dict(self) -> dict:
        d = {"value": self.value, "source": self.source}
        if self.relation != "eq":
            d["relation"] = self.relation
        return d


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    label: str
    salamon: str | None
    tables: tuple[str, ...] = ()
    closed_form: str | None = None
    coclosed: dict | None = field(default=None, hash=False)
    published_perturbation: str | None = None
    expected: dict = field(default_factory=dict, hash=False)
    unavailable: str | None = None

    @cached_property
    def algebra(self) -> LieAlgebra:
        if self.salamon is None:
            raise ValueError(f"{self.name}: structure equations are unavailable")
        return LieAlgebra.from_string(self.salamon)

    @property
    def has_closed(self) -> bool:
        return self.closed_form is not None

    @property
    def has_coclosed(self) -> bool:
        return self.coclosed is not None

    def form(self, kind: str) -> KForm:
        """Reference 3-form ("closed") or 4-form ("coclosed")."""
        if kind == "closed":
            if self.closed_form is None:
                raise ValueError(f"{self.name} has no closed reference form")
            return parse_form(self.closed_form, 7, 3)
        if kind == "coclosed":
            if self.coclosed is None:
                raise ValueError(f"{self.name} has no coclosed reference form")
            if "form" in self.coclosed:
                return parse_form(self.coclosed["form"], 7, 4)
            s = self.coclosed["su3"]
            return build_psi_su3(parse_form(s["omega"], 7, 2), parse_form(s["psi_minus"], 7, 3),
                                 parse_form(s["eta"], 7, 1)).form
        raise ValueError(f"kind must be 'closed' or 'coclosed', got {kind!r}")

    def perturbation(self) -> KForm | None:
        if self.published_perturbation is None:
            return None
        return parse_form(self.published_perturbation, 7)

    @property
    def perturbation_kind(self) -> str | None:
        p = self.perturbation()
        if p is None:
            return None
        return "closed" if p.degree == 3 else "coclosed"

    def to_dict(self) -> dict:
        d = {"name": self.name, "label": self.label, "salamon": self.salamon, "tables": list(self.tables)}
        if self.unavailable is not None:
            d["unavailable"] = self.unavailable
        if self.closed_form is not None:
            d["closed_form"] = self.closed_form
        if self.coclosed is not None:
            d["coclosed"] = self.coclosed
        if self.published_perturbation is not None:
            d["published_perturbation"] = self.published_perturbation
        d["expected"] = {k: v.to_dict() for k, v in self.expected.items()}
        return d


def _check_form(name: str, fld: str, text, dim: int, degree: int) -> None:
    if not isinstance(text, str):
        raise CatalogError("form must be a string", name, fld)
    try:
        parse_form(text, dim, degree)
    except ParseError as e:
        raise CatalogError(str(e), name, fld) from None


def _entry_from_dict(raw: dict, position: int) -> CatalogEntry:
    if not isinstance(raw, dict):
        raise CatalogError(f"entry #{position} is not an object")
    name = raw.get("name")
    if not isinstance(name, str) or not name:
        raise CatalogError(f"entry #{position} has no name")
    unknown = set(raw) - set(_ENTRY_KEYS)
    if unknown:
        raise CatalogError(f"unknown keys {sorted(unknown)}", name)

    salamon = raw.get("salamon")
    dim = 7
    if salamon is None:
        if "unavailable" not in raw:
            raise CatalogError("missing structure equations without an 'unavailable' note", name, "salamon")
        for fld in ("closed_form", "coclosed", "published_perturbation"):
            if raw.get(fld) is not None:
                raise CatalogError("forms given for an unavailable algebra", name, fld)
    else:
        try:
            dim = parse_salamon(salamon).dim
            LieAlgebra.from_string(salamon)
        except (ParseError, JacobiError) as e:
            raise CatalogError(str(e), name, "salamon") from None
        if dim != 7:
            raise CatalogError(f"expected 7 generators, found {dim}", name, "salamon")

    if raw.get("closed_form") is not None:
        _check_form(name, "closed_form", raw["closed_form"], dim, 3)
    coclosed = raw.get("coclosed")
    if coclosed is not None:
        if not isinstance(coclosed, dict) or len(coclosed) != 1 or not set(coclosed) <= {"form", "su3"}:
            raise CatalogError("expected {'form': ...} or {'su3': {...}}", name, "coclosed")
        if "form" in coclosed:
            _check_form(name, "coclosed.form", coclosed["form"], dim, 4)
        else:
            su3 = coclosed["su3"]
            if not isinstance(su3, dict) or set(su3) != {"omega", "psi_minus", "eta"}:
                raise CatalogError("su3 needs omega, psi_minus and eta", name, "coclosed.su3")
            for key, deg in (("omega", 2), ("psi_minus", 3), ("eta", 1)):
                _check_form(name, f"coclosed.su3.{key}", su3[key], dim, deg)
    pert = raw.get("published_perturbation")
    if pert is not None:
        try:
            deg = parse_form(pert, dim).degree
        except ParseError as e:
            raise CatalogError(str(e), name, "published_perturbation") from None
        if deg not in (3, 4):
            raise CatalogError(f"perturbation has degree {deg}", name, "published_perturbation")

    tables = raw.get("tables", [])
    if not isinstance(tables, list) or not all(isinstance(t, str) for t in tables):
        raise CatalogError("tables must be a list of strings", name, "tables")

    expected = {}
    exp_raw = raw.get("expected", {})
    if not isinstance(exp_raw, dict):
        raise CatalogError("expected must be an object", name, "expected")
    for q, v in exp_raw.items():
        fld = f"expected.{q}"
        if q not in QUANTITIES:
            raise CatalogError(f"unknown quantity {q!r}", name, fld)
        if not isinstance(v, dict) or not isinstance(v.get("value"), int) or isinstance(v.get("value"), bool):
            raise CatalogError("value must be an integer", name, fld)
        source = v.get("source")
        if not isinstance(source, str) or not SOURCE_RE.match(source):
            raise CatalogError(f"bad source tag {source!r}", name, fld)
        relation = v.get("relation", "eq")
        if relation not in ("eq", "le"):
            raise CatalogError(f"relation must be 'eq' or 'le', got {relation!r}", name, fld)
        expected[q] = Expected(v["value"], source, relation)

    return CatalogEntry(
        name=name,
        label=raw.get("label", name),
        salamon=salamon,
        tables=tuple(tables),
        closed_form=raw.get("closed_form"),
        coclosed=coclosed,
        published_perturbation=pert,
        expected=expected,
        unavailable=raw.get("unavailable"),
    )


def parse_catalog(text: str) -> list[CatalogEntry]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise CatalogError(f"invalid JSON: {e}") from None
    if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
        raise CatalogError(f"expected an object with schema_version {SCHEMA_VERSION}")
    raw_entries = doc.get("entries")
    if not isinstance(raw_entries, list):
        raise CatalogError("'entries' must be a list")
    entries = []
    seen = set()
    for pos, raw in enumerate(raw_entries):
        e = _entry_from_dict(raw, pos)
        if e.name in seen:
            raise CatalogError("duplicate entry name", e.name, "name")
        seen.add(e.name)
        entries.append(e)
    return entries


def default_catalog_text() -> str:
    return resources.files("g2moduli").joinpath("data/catalog.json").read_text(encoding="utf-8")


def load_catalog(path: str | Path | None = None) -> list[CatalogEntry]:
    """Load and validate a catalog; the shipped one when ``path`` is None."""
    if path is None:
        return parse_catalog(default_catalog_text())
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CatalogError(f"cannot read {path}: {e.strerror}") from None
    except UnicodeDecodeError:
        raise CatalogError(f"{path} is not UTF-8") from None
    return parse_catalog(text)


def serialize_catalog(entries: list[CatalogEntry]) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "entries": [e.to_dict() for e in entries]}
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def get_entry(entries: list[CatalogEntry], name: str) -> CatalogEntry:
    for e in entries:
        if e.name == name:
            return e
    raise KeyError(name)
