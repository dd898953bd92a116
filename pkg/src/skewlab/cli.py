"""Batch front-end: spec files in, newline-delimited JSON records out.

Spec files declare one instance and a list of checks, one statement per
line (or `;`-separated); `#` starts a comment.  Statements:

    ring Z4                        # builtin ring (catalog: prefix ok)
    ring W add=[[...]] mul=[[...]] one=1 names=["0","1",...]
    system quantum-plane(Z3,2)     # builtin extension, replaces ring/maps
    map s = swap                   # builtin map, or explicit images [0,3,2,1]
    derivation dd = id-minus s     # or: zero, or images=[...] sigma=s
    maps id, s                     # the twist family, one map per variable
    deltas zero, dd                # per-variable derivations (default zero)
    c[1,2] = 2                     # leading coefficient of the x2*x1 rewrite
    d[1,2] = [1, 0, 1]             # lower-order terms: constant, then linear
    instance my-label              # optional report label
    output json                    # or: text
    checks weak_sigma_rigid, reduced
    check weak_sigma_skew_armendariz degree_bound=2 subset=block-elementary
    expect weak_sigma_rigid=holds, sigma_rigid=fails

Exit codes: 0 all checks ran and expectations matched, 1 an `expect`
mismatch or failed theorem/witness, 2 spec or usage errors.  Records
carry a `wall_ms` field; strip it before comparing runs byte-for-byte.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .backend import VALID as VALID_BACKENDS
from .backend import get_backend, set_backend
from .catalog import (
    UnknownNameError,
    catalog_listing,
    get_map,
    get_ring,
    get_system,
)
from .maps import (
    MapVerificationError,
    SigmaFamily,
    id_minus_sigma_derivation,
    identity_map,
    orbit_closure,
    sigma_power,
    verify_endomorphism,
    verify_sigma_derivation,
    zero_derivation,
)
from .poly import CommutationSystem, PbwAxiomError, SkewPoly, require_pbw
from .properties import (
    PropertyVerdict,
    SearchBudget,
    block_elementary_subset,
    is_sigma_delta_skew_armendariz,
    is_sigma_rigid,
    is_skew_armendariz,
    is_skew_pi_armendariz,
    is_sigma_skew_armendariz,
    is_weak_armendariz,
    is_weak_sigma_rigid,
    is_weak_sigma_skew_armendariz,
    poly_is_nilpotent,
)
from .rings import (
    FiniteRing,
    RingConstructionError,
    RingError,
    SRing,
    TableRing,
    abelian_failure,
    ni_failure,
    nil_set,
)
from . import theorems as theorem_suite

RECORD_FIELDS = (
    "check",
    "instance",
    "status",
    "witness",
    "bound",
    "expected",
    "context",
    "wall_ms",
)
EXPECT_STATUSES = ("holds", "fails", "holds_up_to_bound")


class SpecError(Exception):
    """Spec-file diagnostic carrying a 1-based line/column position."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col

    def __str__(self):
        if self.line:
            return f"line {self.line}, col {self.col}: {self.message}"
        return self.message


# ---------------------------------------------------------------------------
# spec files


@dataclass
class CheckRequest:
    name: str
    kwargs: dict = field(default_factory=dict)
    line: int = 0
    col: int = 0


@dataclass
class SpecFile:
    """Parsed and validated declaration of one instance plus its checks."""

    ring_name: str | None = None
    ring_tables: dict | None = None
    system_name: str | None = None
    map_decls: dict = field(default_factory=dict)  # name -> source text
    deriv_decls: dict = field(default_factory=dict)  # name -> source text
    family: list = field(default_factory=list)  # map names, one per variable
    deltas: list = field(default_factory=list)  # derivation names / "zero"
    c_entries: dict = field(default_factory=dict)  # (i, j) 0-based -> token
    d_entries: dict = field(default_factory=dict)  # (i, j) 0-based -> list
    label: str = ""
    output_json: bool = True
    checks: list = field(default_factory=list)
    expects: dict = field(default_factory=dict)
    # resolved objects, filled by parse_spec
    ring: FiniteRing | None = field(default=None, repr=False, compare=False)
    system: CommutationSystem | None = field(default=None, repr=False, compare=False)

    @property
    def instance(self) -> str:
        if self.label:
            return self.label
        if self.system_name:
            return self.system_name
        maps = "+".join(self.family) if self.family else "id"
        return f"{self.ring_name}/{maps}"

    def serialize(self) -> str:
        """Canonical statement-per-line text; reparses to an equal spec."""
        out = []
        if self.system_name:
            out.append(f"system {self.system_name}")
        elif self.ring_tables is not None:
            t = self.ring_tables
            out.append(
                f"ring {self.ring_name} add={json.dumps(t['add'])} "
                f"mul={json.dumps(t['mul'])} one={t['one']} "
                f"names={json.dumps(t['names'])}"
            )
        elif self.ring_name:
            out.append(f"ring {self.ring_name}")
        for name, src in self.map_decls.items():
            out.append(f"map {name} = {src}")
        for name, src in self.deriv_decls.items():
            out.append(f"derivation {name} = {src}")
        if self.family:
            out.append("maps " + ", ".join(self.family))
        if self.deltas and any(d != "zero" for d in self.deltas):
            out.append("deltas " + ", ".join(self.deltas))
        for (i, j), tok in sorted(self.c_entries.items()):
            out.append(f"c[{i + 1},{j + 1}] = {tok}")
        for (i, j), row in sorted(self.d_entries.items()):
            out.append(f"d[{i + 1},{j + 1}] = {json.dumps(row)}")
        if self.label:
            out.append(f"instance {self.label}")
        out.append(f"output {'json' if self.output_json else 'text'}")
        for ck in self.checks:
            kw = "".join(f" {k}={v}" for k, v in ck.kwargs.items())
            out.append(f"check {ck.name}{kw}")
        if self.expects:
            out.append(
                "expect " + ", ".join(f"{k}={v}" for k, v in self.expects.items())
            )
        return "\n".join(out) + "\n"


def _statements(text: str):
    """Yield (line, col, statement) with comments stripped, both 1-based."""
    for ln, raw in enumerate(text.split("\n"), start=1):
        body = raw.split("#", 1)[0]
        col = 1
        for piece in body.split(";"):
            stmt = piece.strip()
            if stmt:
                yield ln, col + len(piece) - len(piece.lstrip()), stmt
            col += len(piece) + 1


def _token_col(stmt: str, col0: int, token: str) -> int:
    pos = stmt.find(token)
    return col0 + (pos if pos >= 0 else 0)


_KV_RE = re.compile(r"\b(\w+)\s*=")


def _parse_kv(rest: str, line: int, col: int) -> dict:
    """key=value pairs where values run to the next key (JSON allowed)."""
    hits = list(_KV_RE.finditer(rest))
    if not hits:
        return {}
    lead = rest[: hits[0].start()].strip()
    if lead:
        raise SpecError(f"unexpected token {lead!r}", line, col)
    out = {}
    for h, nxt in zip(hits, hits[1:] + [None]):
        end = nxt.start() if nxt is not None else len(rest)
        val = rest[h.end() : end].strip().rstrip(",")
        if not val:
            raise SpecError(f"missing value for {h.group(1)!r}", line, col)
        out[h.group(1)] = val
    return out


def _json_value(token: str, what: str, line: int, col: int):
    try:
        return json.loads(token)
    except json.JSONDecodeError as e:
        raise SpecError(f"bad JSON in {what}: {e}", line, col) from None


_CD_RE = re.compile(r"([cd])\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*=\s*(.+)")


def parse_spec(text: str) -> SpecFile:
    """Parse and validate; raises SpecError with line/col on any problem."""
    spec = SpecFile()
    pos: dict[str, tuple[int, int]] = {}
    for line, col, stmt in _statements(text):
        head, _, rest = stmt.partition(" ")
        rest = rest.strip()
        cd = _CD_RE.fullmatch(stmt)
        if stmt.startswith("expect"):
            head, rest = "expect", stmt[len("expect"):].lstrip(":").strip()
        if head in ("ring", "system"):
            if spec.ring_name or spec.system_name:
                raise SpecError("ring/system declared twice", line, col)
            pos["ring"] = (line, col)
            if head == "system":
                spec.system_name = rest
            else:
                name, _, tail = rest.partition(" ")
                name = name.removeprefix("catalog:")
                if tail.strip():
                    kv = _parse_kv(tail.strip(), line, col)
                    missing = {"add", "mul", "one", "names"} - set(kv)
                    if missing:
                        raise SpecError(
                            f"explicit ring tables need {sorted(missing)}", line, col
                        )
                    spec.ring_tables = {
                        "add": _json_value(kv["add"], "add table", line, col),
                        "mul": _json_value(kv["mul"], "mul table", line, col),
                        "one": int(kv["one"]),
                        "names": _json_value(kv["names"], "names", line, col),
                    }
                spec.ring_name = name
        elif head == "map":
            name, _, src = rest.partition("=")
            name, src = name.strip(), src.strip()
            if not name or not src:
                raise SpecError("map statement needs `map NAME = SPEC`", line, col)
            spec.map_decls[name] = src
            pos[f"map:{name}"] = (line, col)
        elif head == "derivation":
            name, _, src = rest.partition("=")
            name, src = name.strip(), src.strip()
            if not name or not src:
                raise SpecError(
                    "derivation statement needs `derivation NAME = SPEC`", line, col
                )
            spec.deriv_decls[name] = src
            pos[f"deriv:{name}"] = (line, col)
        elif head == "maps":
            spec.family = [t.strip() for t in rest.split(",") if t.strip()]
            pos["maps"] = (line, col)
            for nm in spec.family:
                pos[f"fam:{nm}"] = (line, _token_col(stmt, col, nm))
        elif head == "deltas":
            spec.deltas = [t.strip() for t in rest.split(",") if t.strip()]
            pos["deltas"] = (line, col)
        elif cd:
            kind, i, j, payload = cd.group(1), int(cd.group(2)), int(cd.group(3)), cd.group(4).strip()
            if not 1 <= i < j:
                raise SpecError(f"{kind}[{i},{j}] needs 1 <= i < j", line, col)
            if kind == "c":
                spec.c_entries[(i - 1, j - 1)] = payload
            else:
                spec.d_entries[(i - 1, j - 1)] = _json_value(
                    payload, f"d[{i},{j}]", line, col
                )
            pos.setdefault("cd", (line, col))
        elif head == "instance":
            spec.label = rest
        elif head == "output":
            if rest not in ("json", "text"):
                raise SpecError("output must be `json` or `text`", line, col)
            spec.output_json = rest == "json"
        elif head in ("check", "checks"):
            if head == "checks":
                names = [t.strip() for t in rest.split(",") if t.strip()]
                for nm in names:
                    spec.checks.append(
                        CheckRequest(nm, {}, line, _token_col(stmt, col, nm))
                    )
            else:
                name, _, tail = rest.partition(" ")
                kw = _parse_kv(tail.strip(), line, col) if tail.strip() else {}
                spec.checks.append(CheckRequest(name, kw, line, col))
        elif head == "expect":
            for part in rest.split(","):
                part = part.strip()
                if not part:
                    continue
                k, eq, v = part.partition("=")
                k, v = k.strip(), v.strip()
                if not eq or v not in EXPECT_STATUSES:
                    raise SpecError(
                        f"expect entries look like CHECK=STATUS with STATUS in "
                        f"{EXPECT_STATUSES}, got {part!r}",
                        line,
                        _token_col(stmt, col, part),
                    )
                spec.expects[k] = v
                pos[f"expect:{k}"] = (line, _token_col(stmt, col, part))
        else:
            raise SpecError(f"unknown statement {head!r}", line, col)
    _resolve_spec(spec, pos)
    return spec


def _resolve_spec(spec: SpecFile, pos: dict) -> None:
    """Build ring/maps/system objects; any failure is a SpecError."""

    def err(key: str, msg) -> SpecError:
        if isinstance(msg, KeyError) and msg.args:
            msg = msg.args[0]
        line, col = pos.get(key, pos.get("ring", (0, 0)))
        return SpecError(str(msg), line, col)

    if spec.system_name:
        if spec.family or spec.deltas or spec.c_entries or spec.d_entries:
            raise err("ring", "a builtin system cannot be combined with maps/deltas/c/d")
        try:
            spec.system = get_system(spec.system_name)
        except UnknownNameError as e:
            raise err("ring", e) from None
        spec.ring = spec.system.ring
        spec.ring_name = spec.ring.name
    else:
        if not spec.ring_name:
            raise SpecError("no ring or system declared", 1, 1)
        try:
            if spec.ring_tables is not None:
                t = spec.ring_tables
                spec.ring = TableRing(
                    spec.ring_name,
                    np.asarray(t["add"]),
                    np.asarray(t["mul"]),
                    int(t["one"]),
                    [str(s) for s in t["names"]],
                )
            else:
                spec.ring = get_ring(spec.ring_name)
        except (UnknownNameError, RingConstructionError, RingError, ValueError) as e:
            raise err("ring", e) from None
        ring = spec.ring

        def builtin_map(name: str):
            # the catalog cache keys maps by ring name, which an
            # explicit-table ring must not share
            if spec.ring_tables is not None:
                if name.strip() in ("id", "identity"):
                    return identity_map(ring)
                raise UnknownNameError(
                    f"unknown map {name.strip()!r} on {ring.name}; available: id"
                )
            return get_map(ring, name)

        resolved_maps = {}
        for name, src in spec.map_decls.items():
            try:
                if src.lstrip().startswith("["):
                    images = _json_value(src, f"map {name}", *pos[f"map:{name}"])
                    resolved_maps[name] = verify_endomorphism(
                        ring, np.asarray(images, dtype=np.int64), name
                    )
                else:
                    resolved_maps[name] = builtin_map(src)
            except (UnknownNameError, MapVerificationError, ValueError) as e:
                raise err(f"map:{name}", e) from None

        family_names = spec.family or ["id"]
        fam_maps = []
        for name in family_names:
            if name in resolved_maps:
                fam_maps.append(resolved_maps[name])
            else:
                try:
                    fam_maps.append(builtin_map(name))
                except UnknownNameError as e:
                    raise err(f"fam:{name}", e) from None
        spec.family = family_names
        family = SigmaFamily(ring, fam_maps)

        delta_names = spec.deltas or ["zero"] * family.n
        if len(delta_names) != family.n:
            raise err("deltas", f"{len(delta_names)} deltas for {family.n} variables")
        deltas = []
        for i, name in enumerate(delta_names):
            if name == "zero":
                deltas.append(zero_derivation(ring, fam_maps[i]))
                continue
            src = spec.deriv_decls.get(name)
            if src is None:
                raise err("deltas", f"unknown derivation {name!r}")
            key = f"deriv:{name}"
            try:
                if src == "zero":
                    deltas.append(zero_derivation(ring, fam_maps[i]))
                elif src.startswith("id-minus"):
                    mname = src.removeprefix("id-minus").strip()
                    base = resolved_maps.get(mname) or builtin_map(mname)
                    deltas.append(id_minus_sigma_derivation(ring, base))
                else:
                    kv = _parse_kv(src, *pos[key])
                    if "images" not in kv or "sigma" not in kv:
                        raise SpecError(
                            "explicit derivations need images=[...] sigma=MAP",
                            *pos[key],
                        )
                    sname = kv["sigma"]
                    base = resolved_maps.get(sname) or builtin_map(sname)
                    images = _json_value(kv["images"], f"derivation {name}", *pos[key])
                    deltas.append(
                        verify_sigma_derivation(
                            ring, base, np.asarray(images, dtype=np.int64), name
                        )
                    )
            except (UnknownNameError, MapVerificationError, ValueError) as e:
                raise err(key, e) from None
        spec.deltas = delta_names

        def elem(token, key):
            token = token.strip().strip('"')
            try:
                return int(token)
            except ValueError:
                pass
            try:
                return ring.element_index(token)
            except KeyError as e:
                raise err(key, e) from None

        c = {pair: elem(tok, "cd") for pair, tok in spec.c_entries.items()}
        d = {}
        for pair, row in spec.d_entries.items():
            vals = [v if isinstance(v, int) else elem(str(v), "cd") for v in row]
            if len(vals) == 1:
                vals += [ring.zero] * family.n
            if len(vals) != family.n + 1:
                raise err(
                    "cd",
                    f"d[{pair[0] + 1},{pair[1] + 1}] needs 1 constant + "
                    f"{family.n} linear entries",
                )
            d[pair] = (vals[0], tuple(vals[1:]))
        for (i, j) in list(c) + list(d):
            if j >= family.n:
                raise err("cd", f"c/d entry references x{j + 1} but n = {family.n}")
        try:
            spec.system = CommutationSystem(
                ring, family, delta=deltas, c=c, d=d, name=spec.instance
            )
        except ValueError as e:
            raise err("ring", e) from None

    try:
        require_pbw(spec.system)
    except PbwAxiomError as e:
        check, detail = e.report.failures[0]
        key = "cd" if check.startswith(("c_nonzero", "overlap")) and "cd" in pos else "ring"
        raise err(key, f"axiom violation {check}: {detail}") from None

    for ck in spec.checks:
        if ck.name not in CHECK_KINDS:
            raise SpecError(
                f"unknown check {ck.name!r}; available: {', '.join(sorted(CHECK_KINDS))}",
                ck.line,
                ck.col,
            )
        for k in ck.kwargs:
            if k not in ("degree_bound", "power_bound", "pair_cap", "subset", "seed"):
                raise SpecError(f"unknown check option {k!r}", ck.line, ck.col)
    declared = {ck.name for ck in spec.checks}
    for name in spec.expects:
        if name not in CHECK_KINDS:
            raise SpecError(
                f"expect references unknown check {name!r}", *pos[f"expect:{name}"]
            )
        if name not in declared:
            spec.checks.append(CheckRequest(name, {}, *pos[f"expect:{name}"]))


# ---------------------------------------------------------------------------
# running checks

# kind: ring (bare ring flag), family (twist family), system (endomorphism
# type zero-product search), system_any (engine-driven search, deltas ok)
CHECK_KINDS = {
    "reduced": "ring",
    "ni": "ring",
    "abelian": "ring",
    "sigma_rigid": "family",
    "weak_sigma_rigid": "family",
    "weak_armendariz": "budget_ring",
    "weak_sigma_skew_armendariz": "system",
    "sigma_skew_armendariz": "system",
    "skew_armendariz": "system",
    "sigma_delta_skew_armendariz": "system_any",
    "skew_pi_armendariz": "system_any",
}

_SYSTEM_CHECKS = {
    "weak_sigma_skew_armendariz": is_weak_sigma_skew_armendariz,
    "sigma_skew_armendariz": is_sigma_skew_armendariz,
    "skew_armendariz": is_skew_armendariz,
    "sigma_delta_skew_armendariz": is_sigma_delta_skew_armendariz,
    "skew_pi_armendariz": is_skew_pi_armendariz,
}


def _ring_flag_verdict(name: str, ring: FiniteRing, instance: str) -> PropertyVerdict:
    if name == "reduced":
        nils = nil_set(ring)
        if len(nils) > 1:
            first = int(nils[1] if nils[0] == ring.zero else nils[0])
            return PropertyVerdict(
                "reduced",
                instance,
                "fails",
                witness={"element": ring.element_name(first), "nilpotent": True},
            )
        return PropertyVerdict("reduced", instance, "holds")
    if name == "ni":
        bad = ni_failure(ring)
        if bad is None:
            return PropertyVerdict("ni", instance, "holds")
        kind, x, y = bad
        return PropertyVerdict(
            "ni",
            instance,
            "fails",
            witness={
                "kind": kind,
                "a": ring.element_name(x),
                "b": ring.element_name(y),
            },
        )
    if name == "abelian":
        bad = abelian_failure(ring)
        if bad is None:
            return PropertyVerdict("abelian", instance, "holds")
        e, r = bad
        return PropertyVerdict(
            "abelian",
            instance,
            "fails",
            witness={"idempotent": ring.element_name(e), "r": ring.element_name(r)},
        )
    raise ValueError(name)


def _budget_from(ck: CheckRequest, spec: SpecFile, defaults: dict) -> SearchBudget:
    kw = {**defaults, **{k: v for k, v in ck.kwargs.items()}}
    subset = None
    subset_name = "full"
    if str(kw.get("subset", "full")) == "block-elementary":
        if not isinstance(spec.ring, SRing):
            raise SpecError(
                "subset=block-elementary needs an S ring", ck.line, ck.col
            )
        subset = block_elementary_subset(spec.ring)
        subset_name = "block-elementary"
    elif isinstance(spec.ring, SRing) and "subset" not in kw:
        # searches over a block ring default to the structured subset;
        # the full carrier is far beyond any pair budget
        subset = block_elementary_subset(spec.ring)
        subset_name = "block-elementary"
    return SearchBudget(
        degree_bound=int(kw.get("degree_bound", 2)),
        power_bound=int(kw.get("power_bound", 4)),
        pair_cap=int(kw.get("pair_cap", 50_000_000)),
        subset=subset,
        subset_name=subset_name,
        seed=int(kw.get("seed", 0)),
    )


def run_check(
    ck: CheckRequest, spec: SpecFile, defaults: dict, backend: str | None
) -> PropertyVerdict:
    kind = CHECK_KINDS[ck.name]
    instance = spec.instance
    if kind == "ring":
        return _ring_flag_verdict(ck.name, spec.ring, instance)
    if kind == "family":
        fn = is_sigma_rigid if ck.name == "sigma_rigid" else is_weak_sigma_rigid
        return fn(spec.ring, spec.system.sigma, instance=instance)
    budget = _budget_from(ck, spec, defaults)
    if kind == "budget_ring":
        return is_weak_armendariz(spec.ring, budget, instance=instance, backend=backend)
    fn = _SYSTEM_CHECKS[ck.name]
    if kind == "system":
        return fn(spec.system, budget, instance=instance, backend=backend)
    return fn(spec.system, budget, instance=instance)


def run_spec(
    spec: SpecFile, defaults: dict | None = None, backend: str | None = None
) -> tuple[list[dict], int]:
    """Execute every check; returns (records, exit_code)."""
    defaults = defaults or {}
    context = {"source": "spec", "spec_text": spec.serialize()}
    records = []
    mismatch = False
    for ck in spec.checks:
        t0 = time.perf_counter()
        verdict = run_check(ck, spec, defaults, backend)
        ms = round((time.perf_counter() - t0) * 1000.0, 3)
        rec = {
            "check": verdict.property,
            "instance": verdict.instance,
            "status": verdict.status,
            "witness": verdict.witness,
            "bound": verdict.bound,
            "expected": spec.expects.get(ck.name),
            "context": context,
            "wall_ms": ms,
        }
        if rec["expected"] is not None and rec["expected"] != rec["status"]:
            rec["mismatch"] = True
            mismatch = True
        records.append(rec)
    return records, (1 if mismatch else 0)


# ---------------------------------------------------------------------------
# output helpers


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON-serializable: {type(o).__name__}")


def _dumps(rec) -> str:
    return json.dumps(rec, separators=(", ", ": "), default=_json_default)


def _emit(records: list[dict], as_json: bool, out=None) -> None:
    out = out or sys.stdout
    for rec in records:
        out.write((_dumps(rec) if as_json else _text_line(rec)) + "\n")


def _text_line(rec: dict) -> str:
    if "theorem" in rec:
        head = f"[{rec['status'].upper():7s}] {rec['theorem']} on {rec['instance']}"
        hyp = rec.get("details", {}).get("failed_hypotheses")
        return head + (f" (missing: {', '.join(hyp)})" if hyp else "")
    head = f"[{rec['status'].upper():7s}] {rec['check']} on {rec['instance']}"
    parts = []
    if rec.get("expected"):
        ok = "ok" if rec["expected"] == rec["status"] else "MISMATCH"
        parts.append(f"expected {rec['expected']}: {ok}")
    wit = rec.get("witness")
    if wit:
        frag = ", ".join(f"{k}={v}" for k, v in list(wit.items())[:4])
        parts.append(f"witness {frag}")
    return head + ("  (" + "; ".join(parts) + ")" if parts else "")


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> int:
    try:
        text = open(args.spec_file, encoding="utf-8").read()
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        spec = parse_spec(text)
        defaults = {
            k: v
            for k, v in (
                ("degree_bound", args.degree_bound),
                ("power_bound", args.power_bound),
                ("pair_cap", args.budget),
                ("seed", args.seed),
            )
            if v is not None
        }
        records, code = run_spec(spec, defaults, backend=args.backend)
    except SpecError as e:
        print(f"{args.spec_file}:{e}", file=sys.stderr)
        return 2
    except (RingError, UnknownNameError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    as_json = args.json or (spec.output_json and not args.text)
    _emit(records, as_json)
    return code


def cmd_verify_theorems(args) -> int:
    t0 = time.perf_counter()
    try:
        reports = theorem_suite.run_all(
            instance=args.instance,
            degree_bound=args.degree_bound if args.degree_bound is not None else 2,
            pair_cap=args.budget if args.budget is not None else 50_000_000,
            ideal_mode=args.ideal_mode,
            backend=None if args.backend == "auto" else args.backend,
        )
    except KeyError as e:
        print(f"error: {e.args[0]}", file=sys.stderr)
        return 2
    ms = round((time.perf_counter() - t0) * 1000.0, 3)
    records = [r.to_record() for r in reports]
    failures = sum(r.status == "fail" for r in reports)
    summary = {
        "record": "summary",
        "theorems": len(records),
        "passed": sum(r.status == "pass" for r in reports),
        "vacuous": sum(r.status == "vacuous" for r in reports),
        "failed": failures,
        "wall_ms": ms,
    }
    if args.json:
        _emit(records + [summary], True)
    else:
        _emit(records, False)
        print(
            f"{summary['theorems']} checks: {summary['passed']} passed, "
            f"{summary['vacuous']} vacuous, {summary['failed']} failed "
            f"({ms:.0f} ms)"
        )
    return 1 if failures else 0


def cmd_catalog(args) -> int:
    if args.what != "list":
        print("error: only `catalog list` is supported", file=sys.stderr)
        return 2
    listing = catalog_listing()
    listing["instances"] = [e.name for e in theorem_suite.DEFAULT_ENTRIES]
    if args.json:
        print(json.dumps(listing, indent=2, default=_json_default))
        return 0
    print("rings:")
    for row in listing["rings"]:
        print(f"  {row['name']:10s} size {row['size']:>8}  maps: {', '.join(row['maps'])}")
    print("systems:")
    for name in listing["systems"]:
        print(f"  {name}")
    print("catalog instances:")
    for name in listing["instances"]:
        print(f"  {name}")
    return 0


# --- explain: re-verify a stored witness record ----------------------------


def _rebuild_system(context: dict) -> CommutationSystem:
    if context.get("source") == "spec":
        return parse_spec(context["spec_text"]).system
    if context.get("source") == "catalog":
        return theorem_suite.resolve(
            theorem_suite.entry_by_name(context["entry"])
        ).system
    raise ValueError(f"record context {context!r} is not reconstructible")


def _poly_from_terms(sys_: CommutationSystem, terms: list[dict]) -> SkewPoly:
    ring = sys_.ring
    return SkewPoly(
        sys_,
        {tuple(t["exp"]): ring.element_index(t["coeff"]) for t in terms},
    )


def _reverify(rec: dict) -> tuple[bool, str]:
    """Re-check a failure witness from its record; (ok, explanation)."""
    if "theorem" in rec:
        if rec["theorem"].startswith("counterexample_"):
            fresh = next(
                r
                for r in theorem_suite.reproduce_counterexamples()
                if r.theorem == rec["theorem"]
            )
        else:
            ctx = theorem_suite.resolve(theorem_suite.entry_by_name(rec["instance"]))
            fresh = {
                "catalog_flags": theorem_suite.check_catalog_flags,
                "rigid_iff_weak_reduced": theorem_suite.check_rigid_iff_weak_reduced,
                "nil_transfer": theorem_suite.check_nil_transfer,
                "idempotent_fixed": theorem_suite.check_idempotent_fixed,
                "ideal_decomposition": theorem_suite.check_ideal_decomposition,
                "ni_weak_rigid_implies_weak_armendariz": theorem_suite.check_weak_armendariz_implication,
            }[rec["theorem"]](ctx)
        ok = fresh.status == rec["status"]
        return ok, (
            f"re-ran {rec['theorem']} on {rec['instance']}: status {fresh.status}"
            + ("" if ok else f" (record says {rec['status']})")
        )
    check, wit = rec["check"], rec.get("witness") or {}
    if rec["status"] != "fails":
        return True, f"{check} on {rec['instance']}: status {rec['status']}, no witness to re-verify"
    sys_ = _rebuild_system(rec["context"])
    ring = sys_.ring
    if check == "reduced":
        a = ring.element_index(wit["element"])
        ok = a != ring.zero and ring.is_nilpotent(a)
        return ok, f"{wit['element']} is a nonzero nilpotent: {ok}"
    if check == "ni":
        a, b = ring.element_index(wit["a"]), ring.element_index(wit["b"])
        if wit["kind"] == "add":
            ok = (
                ring.is_nilpotent(a)
                and ring.is_nilpotent(b)
                and not ring.is_nilpotent(int(ring.add(a, b)))
            )
            return ok, f"nil + nil escapes the nil set: {ok}"
        ok = ring.is_nilpotent(b) and not ring.is_nilpotent(int(ring.mul(a, b)))
        ok = ok or (
            ring.is_nilpotent(a) and not ring.is_nilpotent(int(ring.mul(a, b)))
        )
        return ok, f"nilpotent absorbs under product fails: {ok}"
    if check == "abelian":
        e, r = ring.element_index(wit["idempotent"]), ring.element_index(wit["r"])
        ok = int(ring.mul(e, e)) == e and int(ring.mul(e, r)) != int(ring.mul(r, e))
        return ok, f"idempotent {wit['idempotent']} fails to commute with {wit['r']}: {ok}"
    if check in ("sigma_rigid", "weak_sigma_rigid"):
        maps = {m.name: m for m in orbit_closure(sys_.sigma)}
        m = maps[wit["map"]]
        a = ring.element_index(wit["element"])
        prod = int(ring.mul(a, m(a)))
        if check == "sigma_rigid":
            ok = a != ring.zero and prod == ring.zero
            return ok, f"a != 0 with a*{wit['map']}(a) = 0: {ok}"
        ok = ring.is_nilpotent(prod) != ring.is_nilpotent(a)
        return ok, f"nilpotency of a and a*{wit['map']}(a) disagree: {ok}"
    if check in (
        "weak_sigma_skew_armendariz",
        "sigma_skew_armendariz",
        "skew_armendariz",
        "weak_armendariz",
        "sigma_delta_skew_armendariz",
        "skew_pi_armendariz",
    ):
        f = _poly_from_terms(sys_, wit["f_terms"])
        g = _poly_from_terms(sys_, wit["g_terms"])
        ai = ring.element_index(wit["a_i"])
        bj = ring.element_index(wit["b_j"])
        if check == "skew_pi_armendariz":
            nil_fg, k = poly_is_nilpotent(f * g, int(wit["fg_power_zero_at"]))
            ok = nil_fg and not ring.is_nilpotent(int(ring.mul(ai, bj)))
            return ok, f"(fg)^{k} = 0 with a_i*b_j non-nilpotent: {ok}"
        if not (f * g).is_zero:
            return False, "stored f, g do not multiply to zero"
        if check == "sigma_delta_skew_armendariz":
            term = sys_.monomial(tuple(wit["exp_i"]), ai) * sys_.monomial(
                tuple(wit["exp_j"]), bj
            )
            ok = not term.is_zero
            return ok, f"fg = 0 but the term product is nonzero: {ok}"
        tw = sigma_power(sys_.sigma, tuple(wit["exp_i"]))
        p = int(ring.mul(ai, tw(bj)))
        if check in ("weak_sigma_skew_armendariz", "weak_armendariz"):
            ok = not ring.is_nilpotent(p)
            return ok, f"fg = 0 but a_i*sigma^(alpha_i)(b_j) is not nilpotent: {ok}"
        if check == "sigma_skew_armendariz":
            ok = p != ring.zero
            return ok, f"fg = 0 but a_i*sigma^(alpha_i)(b_j) != 0: {ok}"
        ok = p != ring.zero and list(wit["exp_i"]) == [0] * sys_.n
        return ok, f"fg = 0 but a_0*b_j != 0: {ok}"
    return False, f"unknown check {check!r}"


def cmd_explain(args) -> int:
    try:
        text = open(args.witness_file, encoding="utf-8").read()
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    records = []
    try:
        for ln, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            rec = json.loads(line)
            if isinstance(rec, dict) and rec.get("record") != "summary":
                records.append((ln, rec))
    except json.JSONDecodeError as e:
        print(f"{args.witness_file}: bad record: {e}", file=sys.stderr)
        return 2
    if not records:
        print(f"{args.witness_file}: no records to explain", file=sys.stderr)
        return 2
    all_ok = True
    out = []
    for ln, rec in records:
        try:
            ok, msg = _reverify(rec)
        except (KeyError, ValueError, RingError, SpecError) as e:
            ok, msg = False, f"cannot re-verify: {e}"
        all_ok = all_ok and ok
        out.append(
            {
                "line": ln,
                "verified": ok,
                "explanation": msg,
            }
        )
    if args.json:
        for row in out:
            print(_dumps(row))
    else:
        for row in out:
            mark = "ok " if row["verified"] else "BAD"
            print(f"[{mark}] record at line {row['line']}: {row['explanation']}")
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# entry point


def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--degree-bound", type=int, default=None, metavar="D",
                   help="max f, g degree in zero-product searches")
    p.add_argument("--power-bound", type=int, default=None, metavar="K",
                   help="max exponent when certifying nilpotent polynomials")
    p.add_argument("--seed", type=int, default=None, metavar="N",
                   help="seed for sampled law verification")
    p.add_argument("--budget", type=int, default=None, metavar="N",
                   help="max (f, g) pairs per search")
    p.add_argument("--backend", choices=VALID_BACKENDS, default="auto",
                   help="kernel path (default: auto)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="skewlab",
        description="finite-ring rigidity and zero-product property checker",
    )
    ap.add_argument("--version", action="version", version=f"skewlab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run the checks in a spec file")
    p.add_argument("spec_file")
    p.add_argument("--json", action="store_true", help="force NDJSON output")
    p.add_argument("--text", action="store_true", help="force text output")
    _add_budget_flags(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("verify-theorems", help="run the statement suite over the catalog")
    p.add_argument("--instance", default=None, metavar="NAME",
                   help="restrict to one catalog instance, e.g. R3(Z2)/id")
    p.add_argument("--ideal-mode", choices=("fixed", "literal"), default="fixed",
                   help="reading of the idempotent hypothesis in the ideal decomposition")
    p.add_argument("--json", action="store_true", help="NDJSON output")
    _add_budget_flags(p)
    p.set_defaults(fn=cmd_verify_theorems)

    p = sub.add_parser("catalog", help="inspect builtin rings and systems")
    p.add_argument("what", choices=("list",))
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_catalog)

    p = sub.add_parser("explain", help="re-verify stored witness records")
    p.add_argument("witness_file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_explain)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    backend = getattr(args, "backend", None)
    if backend is not None:
        try:
            set_backend(backend)
        except (ValueError, RuntimeError) as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
