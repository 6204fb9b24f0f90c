"""Recompute every expected catalog value and compare."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial

from .catalog import SCHEMA_VERSION, CatalogEntry
from .g2 import (
    DEFAULT_EPSILON,
    DEFAULT_TRIALS,
    StabilizerSystem,
    is_positive_3form,
    principal_orbit_search,
)
from .liealg import betti, closed_forms_dim, derivation_space, nilpotency_step

__all__ = ["EntryResult", "QuantityResult", "ReproduceReport", "STATUSES", "reproduce", "reproduce_entry"]

STATUSES = ("match", "mismatch", "paper_inconsistency_flag", "upper_bound_only", "unavailable")

_FORM_TABLE = {"closed": "7", "coclosed": ("8", "9")}


@dataclass
class QuantityResult:
    quantity: str
    computed: int | None
    expected: int | None
    source: str
    status: str
    note: str | None = None
    candidates: dict | None = None

    def to_dict(self) -> dict:
        d = {"quantity": self.quantity, "computed": self.computed, "expected": self.expected,
             "source": self.source, "status": self.status}
        if self.note is not None:
            d["note"] = self.note
        if self.candidates is not None:
            d["candidates"] = self.candidates
        return d


@dataclass
class EntryResult:
    name: str
    quantities: list[QuantityResult] = field(default_factory=list)

    def get(self, quantity: str) -> QuantityResult:
        for q in self.quantities:
            if q.quantity == quantity:
                return q
        raise KeyError(quantity)

    def to_dict(self) -> dict:
        return {"name": self.name, "quantities": [q.to_dict() for q in self.quantities]}


@dataclass
class ReproduceReport:
    entries: list[EntryResult]
    seed: int
    trials: int

    @property
    def exit_code(self) -> int:
        return 1 if self.count("mismatch") else 0

    def count(self, status: str) -> int:
        return sum(q.status == status for e in self.entries for q in e.quantities)

    def entry(self, name: str) -> EntryResult:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "seed": self.seed, "trials": self.trials,
                "entries": [e.to_dict() for e in self.entries]}

    def to_text(self) -> str:
        lines = []
        for e in self.entries:
            lines.append(e.name)
            for q in e.quantities:
                line = f"  {q.quantity:<24} computed={q.computed!s:<5} expected={q.expected!s:<5} {q.status}"
                if q.candidates:
                    line += " (" + ", ".join(f"{k}={v}" for k, v in q.candidates.items()) + ")"
                if q.note:
                    line += f"  [{q.note}]"
                lines.append(line)
        summary = ", ".join(f"{s}: {self.count(s)}" for s in STATUSES if self.count(s))
        lines.append(f"summary: {summary}")
        return "\n".join(lines)


def _form_source(entry: CatalogEntry, kind: str) -> str:
    wanted = _FORM_TABLE[kind]
    for t in entry.tables:
        if t in wanted:
            return f"Table {t}"
    return "Example 137A" if "example" in entry.tables else "Remark solvable"


def _status(computed, exp) -> str:
    if computed is None:
        return "mismatch"
    if exp.relation == "le":
        return "upper_bound_only" if computed <= exp.value else "mismatch"
    return "match" if computed == exp.value else "mismatch"


def _published_formula(entry: CatalogEntry, kind: str) -> int | None:
    """Moduli dimension implied by the entry's own published components."""
    ex = entry.expected
    z = ex.get("z3" if kind == "closed" else "z4")
    aut = ex.get("dim_aut")
    stab = ex.get("stab_perturbed") if entry.perturbation_kind == kind else None
    stab = stab or ex.get(f"stab_{kind}")
    if z is None or aut is None or stab is None:
        return None
    return z.value - aut.value + stab.value


def reproduce_entry(entry: CatalogEntry, seed: int = 0, trials: int = DEFAULT_TRIALS,
                    epsilon=DEFAULT_EPSILON) -> EntryResult:
    out = EntryResult(entry.name)
    if entry.salamon is None:
        for q, exp in entry.expected.items():
            out.quantities.append(QuantityResult(q, None, exp.value, exp.source, "unavailable", entry.unavailable))
        return out

    g = entry.algebra
    der = derivation_space(g)
    eps = Fraction(epsilon)
    kinds = [k for k, has in (("closed", entry.has_closed), ("coclosed", entry.has_coclosed)) if has]
    forms = {k: entry.form(k) for k in kinds}

    # reference forms must be closed, and 3-forms positive
    for kind, f in forms.items():
        src = _form_source(entry, kind)
        ok = int(not g.d(f))
        out.quantities.append(QuantityResult(f"{kind}_form_is_closed", ok, 1, src, "match" if ok else "mismatch"))
        if kind == "closed":
            pos = int(is_positive_3form(f))
            out.quantities.append(QuantityResult("closed_form_is_positive", pos, 1, src,
                                                 "match" if pos else "mismatch"))

    def compute(q: str):
        if q == "nilpotency_step":
            return nilpotency_step(g), None
        if q == "b3":
            return betti(g, 3), None
        if q in ("z3", "z4"):
            return closed_forms_dim(g, int(q[1])), None
        if q == "dim_aut":
            return der.dim, None
        if q in ("stab_closed", "stab_coclosed"):
            f = forms[q[5:]]
            return StabilizerSystem(der, f.degree).dimension(f), None
        if q == "stab_perturbed":
            kind = entry.perturbation_kind
            f = forms[kind] + entry.perturbation() * eps
            if kind == "closed" and not is_positive_3form(f):
                return None, "perturbed 3-form is not positive"
            return StabilizerSystem(der, f.degree).dimension(f), None
        if q in ("moduli_closed", "moduli_coclosed"):
            kind = q[7:]
            pert = entry.perturbation()
            perts = [pert] if pert is not None and entry.perturbation_kind == kind else []
            try:
                rep = principal_orbit_search(g, forms[kind], epsilon=eps, trials=trials, seed=seed,
                                             perturbations=perts, name=entry.name, der=der)
            except ValueError as e:
                return None, str(e)
            note = f"stab {rep.stab_best}, upper bound only" if rep.is_upper_bound_only else None
            return rep.moduli_dim, note
        raise KeyError(q)

    for q, exp in entry.expected.items():
        computed, note = compute(q)
        status = _status(computed, exp)
        candidates = None
        if q.startswith("moduli_") and exp.relation == "eq":
            formula = _published_formula(entry, q[7:])
            if formula is not None and formula != exp.value and computed == formula:
                status = "paper_inconsistency_flag"
                candidates = {"from_components": formula, "published": exp.value}
        out.quantities.append(QuantityResult(q, computed, exp.value, exp.source, status, note, candidates))
    return out


def reproduce(entries: list[CatalogEntry], seed: int = 0, trials: int = DEFAULT_TRIALS,
              jobs: int = 1) -> ReproduceReport:
    """Results come back in catalog order whatever the pool does."""
    work = partial(reproduce_entry, seed=seed, trials=trials)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, entries))
    else:
        results = [work(e) for e in entries]
    return ReproduceReport(results, seed, trials)
