"""Re-verification of the structural statements over the builtin catalog.

Each check runs one statement on one (ring, twist family) instance.
Hypotheses are evaluated first; instances that miss them are reported
"vacuous" with the failing hypothesis named, never silently skipped.
A "fail" status means the statement itself was contradicted by an
exhaustive or bounded sweep, which no catalog instance should produce.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rings as R
from .catalog import get_map, get_ring, get_system
from .maps import SigmaFamily, orbit_closure
from .poly import CommutationSystem
from .properties import (
    PropertyVerdict,
    SearchBudget,
    block_elementary_subset,
    family_label,
    is_sigma_rigid,
    is_weak_sigma_rigid,
    is_weak_sigma_rigid_ideal,
    is_weak_sigma_skew_armendariz,
)
from .rings import (
    FiniteRing,
    SRing,
    abelian_failure,
    central_idempotents,
    idempotents,
    is_abelian,
    is_central,
    is_ni,
    is_reduced,
    make_ideal,
    power_trajectory,
    principal_right_set,
)

PAIR_SWEEP_CAP = 1024  # exhaustive (a, b) nil-transfer sweeps up to this size


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    ring_name: str
    map_names: tuple[str, ...]
    system_name: str
    expected: dict


DEFAULT_ENTRIES: list[CatalogEntry] = [
    CatalogEntry(
        "Z2/id", "Z2", ("id",), "untwisted(Z2)",
        {"reduced": True, "ni": True, "abelian": True, "sigma_rigid": True, "weak_sigma_rigid": True},
    ),
    CatalogEntry(
        "Z3/id", "Z3", ("id",), "untwisted(Z3)",
        {"reduced": True, "ni": True, "abelian": True, "sigma_rigid": True, "weak_sigma_rigid": True},
    ),
    CatalogEntry(
        "Z4/id", "Z4", ("id",), "untwisted(Z4)",
        {"reduced": False, "ni": True, "abelian": True, "sigma_rigid": False, "weak_sigma_rigid": True},
    ),
    CatalogEntry(
        "Z6/id", "Z6", ("id",), "untwisted(Z6)",
        {"reduced": True, "ni": True, "abelian": True, "sigma_rigid": True, "weak_sigma_rigid": True},
    ),
    CatalogEntry(
        "Z2xZ2/id", "Z2xZ2", ("id",), "untwisted(Z2xZ2)",
        {"reduced": True, "ni": True, "abelian": True, "sigma_rigid": True, "weak_sigma_rigid": True},
    ),
    CatalogEntry(
        "Z2xZ2/swap", "Z2xZ2", ("swap",), "swap-ore",
        {"reduced": True, "ni": True, "abelian": True, "sigma_rigid": False, "weak_sigma_rigid": False},
    ),
    CatalogEntry(
        "M2(Z2)/id", "M2(Z2)", ("id",), "untwisted(M2(Z2))",
        {"reduced": False, "ni": False, "abelian": False, "sigma_rigid": False, "weak_sigma_rigid": True},
    ),
    CatalogEntry(
        "R3(Z2)/id", "R3(Z2)", ("id",), "untwisted(R3(Z2))",
        {"reduced": False, "ni": True, "abelian": True, "sigma_rigid": False, "weak_sigma_rigid": True},
    ),
    CatalogEntry(
        "S(Z3)/negate-B", "S(Z3)", ("negate-B",), "s-negate-b(Z3)",
        {"reduced": False, "ni": False, "abelian": False, "sigma_rigid": False, "weak_sigma_rigid": True},
    ),
    CatalogEntry(
        "S(Z4)/negate-B", "S(Z4)", ("negate-B",), "s-negate-b(Z4)",
        {"reduced": False, "ni": False, "abelian": False, "sigma_rigid": False, "weak_sigma_rigid": True},
    ),
]


@dataclass
class EntryContext:
    entry: CatalogEntry
    ring: FiniteRing
    family: SigmaFamily
    system: CommutationSystem


_ctx_cache: dict[str, EntryContext] = {}


def entry_by_name(name: str) -> CatalogEntry:
    for e in DEFAULT_ENTRIES:
        if e.name == name:
            return e
    known = ", ".join(e.name for e in DEFAULT_ENTRIES)
    raise KeyError(f"unknown instance {name!r}; known: {known}")


def resolve(entry: CatalogEntry) -> EntryContext:
    ctx = _ctx_cache.get(entry.name)
    if ctx is None:
        ring = get_ring(entry.ring_name)
        family = SigmaFamily(ring, [get_map(ring, n) for n in entry.map_names])
        system = get_system(entry.system_name)
        ctx = EntryContext(entry, ring, family, system)
        _ctx_cache[entry.name] = ctx
    return ctx


@dataclass
class TheoremReport:
    theorem: str
    instance: str
    status: str  # "pass" | "fail" | "vacuous"
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_record(self) -> dict:
        return {
            "record": "theorem",
            "theorem": self.theorem,
            "instance": self.instance,
            "status": self.status,
            "details": self.details,
        }


def _flags(ctx: EntryContext) -> dict:
    key = "_flags_" + ctx.entry.name
    got = _ctx_cache.get(key)
    if got is not None:
        return got  # type: ignore[return-value]
    rigid = is_sigma_rigid(ctx.ring, ctx.family, instance=ctx.entry.name)
    weak = is_weak_sigma_rigid(ctx.ring, ctx.family, instance=ctx.entry.name)
    flags = {
        "reduced": is_reduced(ctx.ring),
        "ni": is_ni(ctx.ring),
        "abelian": is_abelian(ctx.ring),
        "sigma_rigid": rigid.holds,
        "weak_sigma_rigid": weak.holds,
        "_rigid_verdict": rigid,
        "_weak_verdict": weak,
    }
    _ctx_cache[key] = flags  # type: ignore[assignment]
    return flags


def check_catalog_flags(ctx: EntryContext) -> TheoremReport:
    """Computed classification flags must match the catalog expectations."""
    flags = _flags(ctx)
    computed = {k: v for k, v in flags.items() if not k.startswith("_")}
    mismatches = {
        k: {"expected": ctx.entry.expected[k], "computed": computed[k]}
        for k in ctx.entry.expected
        if ctx.entry.expected[k] != computed[k]
    }
    details = {"computed": computed, "expected": dict(ctx.entry.expected)}
    if mismatches:
        details["mismatches"] = mismatches
    return TheoremReport(
        "catalog_flags", ctx.entry.name, "fail" if mismatches else "pass", details
    )


def check_rigid_iff_weak_reduced(ctx: EntryContext) -> TheoremReport:
    """Rigid exactly when weak rigid and reduced, on every instance."""
    flags = _flags(ctx)
    lhs = flags["sigma_rigid"]
    rhs = flags["weak_sigma_rigid"] and flags["reduced"]
    details = {
        "sigma_rigid": flags["sigma_rigid"],
        "weak_sigma_rigid": flags["weak_sigma_rigid"],
        "reduced": flags["reduced"],
    }
    rv: PropertyVerdict = flags["_rigid_verdict"]
    wv: PropertyVerdict = flags["_weak_verdict"]
    if rv.witness:
        details["rigid_witness"] = rv.witness
    if wv.witness:
        details["weak_witness"] = wv.witness
    return TheoremReport(
        "rigid_iff_weak_reduced",
        ctx.entry.name,
        "pass" if lhs == rhs else "fail",
        details,
    )


def check_nil_transfer(ctx: EntryContext) -> TheoremReport:
    """NI + weak rigid force the three nilpotence transfer implications.

    (1) ab nil => a*m(b) and m(a)*b nil; (2) m(a)*b nil => ab, ba nil;
    (3) a*m(b) nil => ab, ba nil; swept over all pairs and all closure
    maps m.
    """
    flags = _flags(ctx)
    gate = {"ni": flags["ni"], "weak_sigma_rigid": flags["weak_sigma_rigid"]}
    if not all(gate.values()):
        missing = [k for k, v in gate.items() if not v]
        return TheoremReport(
            "nil_transfer", ctx.entry.name, "vacuous",
            {"failed_hypotheses": missing},
        )
    ring = ctx.ring
    if ring.size > PAIR_SWEEP_CAP:
        raise R.BudgetError(
            f"nil transfer sweep over {ring.size}^2 pairs exceeds cap"
        )
    maps = orbit_closure(ctx.family)
    nil = ring.nil_mask()
    idx = ring.elements()
    ab = np.asarray(ring.mul(idx[:, None], idx[None, :]))
    nil_ab = nil[ab]
    nil_ba = nil_ab.T
    for m in maps:
        ma = m.table[idx]
        n_amb = nil[np.asarray(ring.mul(idx[:, None], ma[None, :]))]
        n_mab = nil[np.asarray(ring.mul(ma[:, None], idx[None, :]))]
        parts = [
            ("ab_nil_transfers", nil_ab & ~(n_amb & n_mab)),
            ("ma_b_nil_pulls_back", n_mab & ~(nil_ab & nil_ba)),
            ("a_mb_nil_pulls_back", n_amb & ~(nil_ab & nil_ba)),
        ]
        for part, bad in parts:
            if bad.any():
                a, b = np.unravel_index(int(np.argmax(bad)), bad.shape)
                return TheoremReport(
                    "nil_transfer", ctx.entry.name, "fail",
                    {
                        "part": part,
                        "map": m.name,
                        "a": ring.element_name(int(a)),
                        "b": ring.element_name(int(b)),
                    },
                )
    return TheoremReport(
        "nil_transfer", ctx.entry.name, "pass",
        {"maps_swept": len(maps), "pairs": ring.size**2},
    )


def check_idempotent_fixed(ctx: EntryContext) -> TheoremReport:
    """NI + weak rigid force every twist to fix central idempotents."""
    flags = _flags(ctx)
    ring = ctx.ring
    gate = {"ni": flags["ni"], "weak_sigma_rigid": flags["weak_sigma_rigid"]}
    central = [int(e) for e in central_idempotents(ring)]
    if not all(gate.values()):
        missing = [k for k, v in gate.items() if not v]
        details: dict = {"failed_hypotheses": missing}
        # when the gate fails a twist may genuinely move a central
        # idempotent; record the first one as evidence
        for e in central:
            for m in ctx.family.maps:
                if int(m(e)) != e:
                    details["moved_central_idempotent"] = {
                        "e": ring.element_name(e),
                        "map": m.name,
                        "image": ring.element_name(int(m(e))),
                    }
                    break
            if "moved_central_idempotent" in details:
                break
        return TheoremReport("idempotent_fixed", ctx.entry.name, "vacuous", details)
    for e in central:
        for m in ctx.family.maps:
            if int(m(e)) != e:
                return TheoremReport(
                    "idempotent_fixed", ctx.entry.name, "fail",
                    {
                        "e": ring.element_name(e),
                        "map": m.name,
                        "image": ring.element_name(int(m(e))),
                    },
                )
    return TheoremReport(
        "idempotent_fixed", ctx.entry.name, "pass",
        {"central_idempotents": len(central), "maps": len(ctx.family.maps)},
    )


def check_ideal_decomposition(ctx: EntryContext, mode: str = "fixed") -> TheoremReport:
    """Weak rigidity of R versus its eR / (1-e)R ideal pair, per idempotent.

    The statement's hypothesis asks the twists to send every idempotent
    e to 0, which no unital endomorphism satisfies at e = 1; `mode`
    picks the reading: "fixed" requires sigma_i(e) = e instead,
    "literal" keeps sigma_i(e) = 0 and reports the instance vacuous,
    naming the first unsatisfiable idempotent.
    """
    if mode not in ("fixed", "literal"):
        raise ValueError("mode must be 'fixed' or 'literal'")
    flags = _flags(ctx)
    ring = ctx.ring
    if mode == "literal":
        # sigma_i(1) = 1 for every unital endomorphism, so the literal
        # reading is unsatisfiable at e = 1 on any instance
        e, m = ring.one, ctx.family.maps[0]
        return TheoremReport(
            "ideal_decomposition", ctx.entry.name, "vacuous",
            {
                "mode": mode,
                "failed_hypotheses": ["idempotent_condition[literal]"],
                "unsatisfiable_at": ring.element_name(e),
                "reason": (
                    f"sigma({ring.element_name(e)}) = "
                    f"{ring.element_name(int(m(e)))} != {ring.element_name(ring.zero)}"
                ),
            },
        )
    if not flags["abelian"]:
        return TheoremReport(
            "ideal_decomposition", ctx.entry.name, "vacuous",
            {"failed_hypotheses": ["abelian"], "mode": mode,
             "abelian_witness": abelian_failure(ring)},
        )
    idems = [int(e) for e in idempotents(ring)]
    for e in idems:
        for m in ctx.family.maps:
            img = int(m(e))
            if img != e:
                details = {
                    "mode": mode,
                    "failed_hypotheses": ["idempotent_condition[fixed]"],
                    "unsatisfiable_at": ring.element_name(e),
                    "reason": (
                        f"sigma({ring.element_name(e)}) = "
                        f"{ring.element_name(img)} != {ring.element_name(e)}"
                    ),
                }
                return TheoremReport(
                    "ideal_decomposition", ctx.entry.name, "vacuous", details
                )
    # hypothesis satisfied; assert (1) <=> (2) over every idempotent
    lhs = flags["weak_sigma_rigid"]
    per_e = {}
    rhs_all = True
    for e in idems:
        one_minus_e = int(ring.sub(ring.one, e))
        sides = {}
        for label, gen in (("eR", e), (f"(1-e)R", one_minus_e)):
            ideal = make_ideal(
                ring, principal_right_set(ring, gen),
                f"{ring.element_name(gen)}*R",
            )
            v = is_weak_sigma_rigid_ideal(ring, ctx.family, ideal)
            sides[label] = v.holds
            rhs_all = rhs_all and v.holds
        per_e[ring.element_name(e)] = sides
    status = "pass" if lhs == rhs_all else "fail"
    return TheoremReport(
        "ideal_decomposition", ctx.entry.name, status,
        {
            "mode": mode,
            "weak_sigma_rigid": lhs,
            "all_ideal_pairs_weak_rigid": rhs_all,
            "per_idempotent": per_e,
        },
    )


def _counterexample_budget(ring: FiniteRing, degree_bound: int, pair_cap: int) -> SearchBudget:
    if isinstance(ring, SRing):
        return SearchBudget(
            degree_bound=1,
            pair_cap=pair_cap,
            subset=block_elementary_subset(ring),
            subset_name="block-elementary",
        )
    return SearchBudget(degree_bound=degree_bound, pair_cap=pair_cap)


def check_weak_armendariz_implication(
    ctx: EntryContext,
    degree_bound: int = 2,
    pair_cap: int = 50_000_000,
    backend: str | None = None,
) -> TheoremReport:
    """NI + weak rigid (c central invertible) force weak twisted Armendariz.

    Gated instances run the zero-product search to the degree bound; a
    witness there would contradict the statement.  When NI is the only
    failing hypothesis and the conclusion also fails, the witness is
    recorded: the instance shows the NI hypothesis is essential.
    """
    flags = _flags(ctx)
    sys = ctx.system
    gate = {
        "ni": flags["ni"],
        "weak_sigma_rigid": flags["weak_sigma_rigid"],
        "endomorphism_type": sys.endomorphism_type,
        "c_central_invertible": sys.endomorphism_type and sys.c_central_invertible(),
    }
    if all(gate.values()):
        budget = SearchBudget(degree_bound=degree_bound, pair_cap=pair_cap)
        verdict = is_weak_sigma_skew_armendariz(
            sys, budget, instance=ctx.entry.name, backend=backend
        )
        if verdict.fails:
            return TheoremReport(
                "ni_weak_rigid_implies_weak_armendariz", ctx.entry.name, "fail",
                {"witness": verdict.witness},
            )
        return TheoremReport(
            "ni_weak_rigid_implies_weak_armendariz", ctx.entry.name, "pass",
            {"bound": verdict.bound},
        )
    missing = [k for k, v in gate.items() if not v]
    details: dict = {"failed_hypotheses": missing}
    if (
        missing == ["ni"]
        and sys.endomorphism_type
        and flags["weak_sigma_rigid"]
    ):
        budget = _counterexample_budget(ctx.ring, degree_bound, pair_cap)
        verdict = is_weak_sigma_skew_armendariz(sys, budget, instance=ctx.entry.name)
        if verdict.fails:
            details["conclusion_fails_too"] = verdict.witness
            details["note"] = (
                "weak rigid but not NI, and the weak Armendariz conclusion "
                "fails as well: the NI hypothesis is essential"
            )
    return TheoremReport(
        "ni_weak_rigid_implies_weak_armendariz", ctx.entry.name, "vacuous", details
    )


def reproduce_counterexamples(
    pair_cap: int = 50_000_000, backend: str | None = None
) -> list[TheoremReport]:
    """The two documented separating examples, re-derived from scratch.

    R3 over a rigid base is weak rigid but not rigid; S with the
    negate-B twist is weak rigid but not weak twisted Armendariz, with
    the non-nilpotent coefficient product certified by a power cycle.
    """
    out = []
    # upper-triangular R3: weak rigid, not rigid
    r3 = resolve(entry_by_name("R3(Z2)/id"))
    weak = is_weak_sigma_rigid(r3.ring, r3.family, instance=r3.entry.name)
    rigid = is_sigma_rigid(r3.ring, r3.family, instance=r3.entry.name)
    ok = weak.holds and rigid.fails
    out.append(
        TheoremReport(
            "counterexample_weak_not_rigid",
            r3.entry.name,
            "pass" if ok else "fail",
            {
                "weak_sigma_rigid": weak.status,
                "sigma_rigid": rigid.status,
                "rigid_witness": rigid.witness,
            },
        )
    )
    # block ring S: weak rigid, not weak twisted Armendariz
    s = resolve(entry_by_name("S(Z3)/negate-B"))
    weak_s = is_weak_sigma_rigid(s.ring, s.family, instance=s.entry.name)
    budget = _counterexample_budget(s.ring, 1, pair_cap)
    arm = is_weak_sigma_skew_armendariz(s.system, budget, instance=s.entry.name)
    details: dict = {
        "weak_sigma_rigid": weak_s.status,
        "weak_sigma_skew_armendariz": arm.status,
        "witness": arm.witness,
    }
    ok = weak_s.holds and arm.fails
    if ok:
        # certify the witness product really has no zero power: its
        # power sequence closes a cycle that never reaches 0
        p = s.ring.element_index(arm.witness["product"])
        powers, reaches_zero = power_trajectory(s.ring, p)
        ok = ok and not reaches_zero
        details["power_certificate"] = {
            "element": arm.witness["product"],
            "powers_before_cycle": len(powers),
            "reaches_zero": reaches_zero,
        }
    out.append(
        TheoremReport(
            "counterexample_weak_rigid_not_armendariz",
            s.entry.name,
            "pass" if ok else "fail",
            details,
        )
    )
    return out


THEOREM_ORDER = [
    "catalog_flags",
    "rigid_iff_weak_reduced",
    "nil_transfer",
    "idempotent_fixed",
    "ideal_decomposition",
    "ni_weak_rigid_implies_weak_armendariz",
]


def run_all(
    instance: str | None = None,
    degree_bound: int = 2,
    pair_cap: int = 50_000_000,
    ideal_mode: str = "fixed",
    backend: str | None = None,
) -> list[TheoremReport]:
    """Every theorem over every catalog entry, in a fixed order."""
    if instance is not None:
        entries = [entry_by_name(instance)]
    else:
        entries = list(DEFAULT_ENTRIES)
    out: list[TheoremReport] = []
    for entry in entries:
        out.append(check_catalog_flags(resolve(entry)))
    for entry in entries:
        out.append(check_rigid_iff_weak_reduced(resolve(entry)))
    for entry in entries:
        out.append(check_nil_transfer(resolve(entry)))
    for entry in entries:
        out.append(check_idempotent_fixed(resolve(entry)))
    for entry in entries:
        out.append(check_ideal_decomposition(resolve(entry), mode=ideal_mode))
    for entry in entries:
        out.append(
            check_weak_armendariz_implication(
                resolve(entry), degree_bound=degree_bound,
                pair_cap=pair_cap, backend=backend,
            )
        )
    if instance is None or instance in ("R3(Z2)/id", "S(Z3)/negate-B"):
        cx = reproduce_counterexamples(pair_cap=pair_cap, backend=backend)
        if instance is not None:
            cx = [r for r in cx if r.instance == instance]
        out.extend(cx)
    return out
