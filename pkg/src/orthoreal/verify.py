"""Acceptance suite: each criterion is a function returning a CriterionResult.

Used by ``orthoreal verify-paper`` and by tests/test_acceptance.py.  The
``quick`` budget shrinks sample counts so the whole suite runs in a few
minutes; ``desk`` uses the full counts.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field

import numpy as np

from .algebra import linalg as la
from .constructions import build_h, build_h0, build_u, build_u1, negative_control
from .decomp import check_invariants, decompose
from .errors import GroupTooLarge, SearchTooLarge
from .forms import standard_space
from .ogroup import GroupSpec, derived_subgroup, enumerate_group, group_order, random_element, spinor_norm

log = logging.getLogger("orthoreal.verify")

BUDGETS = {
    "desk": {"spinor_pairs": 500, "decomp_samples": 300, "omega_samples": 200, "so_samples": 500},
    "quick": {"spinor_pairs": 40, "decomp_samples": 20, "omega_samples": 25, "so_samples": 60},
}


@dataclass
class CriterionResult:
    number: int
    label: str
    passed: bool
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:>2} [{self.label}]: {status} ({self.seconds:.1f}s)"

    def to_dict(self) -> dict:
        return {"criterion": self.number, "label": self.label, "passed": self.passed,
                "seconds": round(self.seconds, 2), "detail": self.detail}


def _spaces(ns, qs):
    for q in qs:
        for n in ns:
            if q % 2 == 0 and n % 2:
                continue
            for sign in ((1, -1) if n % 2 == 0 else (1,)):
                yield standard_space(n, q, sign)


def _name(S) -> str:
    return GroupSpec("O", S).name()[1:]


def criterion_1(budget: str = "desk") -> CriterionResult:
    rows, ok = [], True
    for n, q in ((2, 3), (2, 5), (4, 3), (6, 2)):
        for sign in (1, -1):
            S = standard_space(n, q, sign)
            size = {t: len(enumerate_group(GroupSpec(t, S))) for t in ("O", "SO", "K", "T", "Omega")}
            idx = {t: size["O"] // size[t] for t in ("SO", "K", "T", "Omega")}
            exact = all(size["O"] % size[t] == 0 for t in size)
            want_omega = 4 if S.odd else 2
            good = exact and idx["SO"] == idx["K"] == idx["T"] == 2 and idx["Omega"] == want_omega
            ok &= good
            rows.append({"space": _name(S), "order_O": size["O"], "indices": idx, "holds": good})
    return CriterionResult(1, "subgroup lattice indices", ok, detail={"cases": rows})


def criterion_2(budget: str = "desk", seed: int = 0) -> CriterionResult:
    pairs = BUDGETS[budget]["spinor_pairs"]
    rng = random.Random(seed)
    hom_fail = []
    for S in _spaces(range(2, 7), (3, 5, 7, 9)):
        G = GroupSpec("O", S)
        bad = 0
        for _ in range(pairs):
            g, h = random_element(G, rng), random_element(G, rng)
            if spinor_norm(g @ h) != spinor_norm(g) * spinor_norm(h):
                bad += 1
            elif spinor_norm(h @ g @ h.inverse()) != spinor_norm(g):
                bad += 1
        if bad:
            hom_fail.append({"space": _name(S), "failures": bad})
        log.info("spinor norm checks on %s: %d failures", _name(S), bad)
    oracle = []
    for S in _spaces(range(2, 7), (2, 3, 4, 5, 7, 8, 9)):
        if group_order("O", S) > 10**5:
            continue
        O = enumerate_group(GroupSpec("O", S))
        Om = enumerate_group(GroupSpec("Omega", S))
        D = derived_subgroup(O)
        agree = len(D) == len(Om) and bool((Om.find(D) >= 0).all())
        oracle.append({"space": _name(S), "omega": len(Om), "commutator_closure": len(D), "agrees": agree})
    ok = not hom_fail and all(r["agrees"] for r in oracle)
    return CriterionResult(2, "spinor norm homomorphism and Omega oracle", ok,
                           detail={"pairs_per_space": pairs, "homomorphism_failures": hom_fail,
                                   "oracle": oracle,
                                   "disagreements": [r for r in oracle if not r["agrees"]]})


def criterion_3(budget: str = "desk", seed: int = 0) -> CriterionResult:
    samples = BUDGETS[budget]["decomp_samples"]
    rng = random.Random(seed)
    failures, total = [], 0
    for S in _spaces(range(2, 9), (2, 3, 4, 5)):
        G = GroupSpec("O", S)
        for _ in range(samples):
            g = random_element(G, rng)
            total += 1
            r = check_invariants(decompose(g))
            if not all(r.values()):
                failures.append({"space": _name(S), "matrix": g.matrix.tolist(),
                                 "failed": [k for k, v in r.items() if not v]})
        log.info("decomposition invariants on %s done", _name(S))
    return CriterionResult(3, "decomposition invariants", not failures,
                           detail={"elements": total, "failures": failures[:20]})


def criterion_4(budget: str = "desk") -> CriterionResult:
    from .reality import census

    rows, ok = [], True
    for sign in (1, -1):
        G = GroupSpec("Omega", standard_space(6, 2, sign))
        rep = census(G)
        mism = []
        for c in rep.classes:
            pred = c.extra.get("predicate")
            if not (c.real == c.strongly_real == pred):
                mism.append({"rep": c.rep.tolist(), "size": c.size, "real": c.real,
                             "strongly_real": c.strongly_real, "predicate": pred,
                             "divisors": [[str(f), e] for f, e in la.elementary_divisors(G.field, c.rep)]})
        ok &= not mism
        rows.append({"group": rep.group, "order": rep.order, "classes": len(rep.classes),
                     "real": rep.n_real, "strongly_real": rep.n_strongly_real, "mismatches": mism})
    return CriterionResult(4, "char 2 strong reality predicate (Omega(6,2))", ok, detail={"groups": rows})


def criterion_5(budget: str = "desk") -> CriterionResult:
    builders = {"u": build_u, "u1": build_u1, "h": build_h, "h0": build_h0}
    rows, ok = [], True
    for q in (3, 7):
        for name, build in builders.items():
            try:
                c = build(q)
            except SearchTooLarge as exc:
                if name == "h0" and q == 7:
                    rows.append({"q": q, "name": name, "status": "reported: search cap exceeded",
                                 "error": exc.to_dict()})
                    continue
                raise
            ok &= c.ok
            rows.append({"q": q, "name": name, "ok": c.ok,
                         "assertions": [(a["name"], a["holds"]) for a in c.assertions]})
            log.info("construction %s at q=%d: %s", name, q, "ok" if c.ok else "FAILED")
    return CriterionResult(5, "explicit weakly real constructions", ok, detail={"constructions": rows})


def criterion_6(budget: str = "desk") -> CriterionResult:
    c = negative_control(3)
    return CriterionResult(6, "negative control not real", c.ok, detail=c.to_dict())


def criterion_7(budget: str = "desk", seed: int = 0) -> CriterionResult:
    from .reality import decide_reality

    count = BUDGETS[budget]["omega_samples"]
    G = GroupSpec("Omega", standard_space(6, 5, 1))
    rng = random.Random(seed)
    real = strong = 0
    bad, capped = [], []
    for i in range(count):
        g = random_element(G, rng)
        try:
            v = decide_reality(g, G)
        except SearchTooLarge as exc:
            capped.append({"index": i, "matrix": g.matrix.tolist(), **exc.to_dict()})
            log.warning("element %d: search cap exceeded, skipped", i)
            continue
        real += v.is_real
        strong += v.is_strongly_real
        if v.is_real and not v.is_strongly_real:
            bad.append(g.matrix.tolist())
    return CriterionResult(7, "real implies strongly real in Omega+(6,5)", not bad,
                           detail={"samples": count, "real": real, "strongly_real": strong,
                                   "counterexamples": bad, "cap_fallbacks": capped})


def criterion_8(budget: str = "desk", seed: int = 0) -> CriterionResult:
    from .reality import decide_reality, structural_real_so

    count = BUDGETS[budget]["so_samples"]
    rng = random.Random(seed)
    rows, mism, checked = [], [], 0
    for sign in (1, -1):
        G = GroupSpec("SO", standard_space(6, 3, sign))
        n_real = 0
        for _ in range(count):
            g = random_element(G, rng)
            try:
                brute = decide_reality(g, G).is_real
            except SearchTooLarge:
                continue
            checked += 1
            n_real += brute
            if structural_real_so(g) != brute:
                mism.append({"group": G.name(), "matrix": g.matrix.tolist(), "brute": brute})
        rows.append({"group": G.name(), "samples": count, "real": n_real})
    ok = not mism and (budget != "desk" or checked >= 500)
    return CriterionResult(8, "structural SO reality criterion", ok,
                           detail={"checked": checked, "groups": rows, "mismatches": mism})


def _involution_outside(big, small) -> np.ndarray:
    F = big.field
    I = np.eye(big.n, dtype=np.int64)
    sq = F.matmul(big.elems, big.elems)
    for i in range(len(big)):
        if np.array_equal(sq[i], I) and not np.array_equal(big.elems[i], I) and small.find(big.elems[i])[0] < 0:
            return big.elems[i]
    raise ValueError("no involution outside the subgroup")


def criterion_9(budget: str = "desk") -> CriterionResult:
    from .characters import char_table, lift_check, weak_index_two_check

    tables, ok = [], True
    for tag, n, q, sign in (("Omega", 4, 3, 1), ("Omega", 4, 3, -1), ("Omega", 6, 2, 1), ("Omega", 6, 2, -1),
                            ("SO", 4, 3, -1), ("O", 4, 3, 1), ("O", 4, 3, -1)):
        T = char_table(GroupSpec.standard(tag, n, q, sign))
        v = T.validate()
        if tag == "O":
            v["all_indicators_plus_one"] = all(e == 1 for e in T.indicators)
        if tag == "Omega" and q == 2:
            v["indicators_nonnegative"] = all(e >= 0 for e in T.indicators)
        ok &= all(v.values())
        tables.append({"group": T.group, "order": T.order, "classes": T.n_classes,
                       "degrees": T.degrees, "indicators": T.indicators, "checks": v})
    G = GroupSpec.standard("K", 4, 3, -1)
    H = GroupSpec.standard("Omega", 4, 3, -1)
    TG = char_table(G)
    TH = char_table(H, ell=TG.ell)
    s = _involution_outside(TG.grp, TH.grp)
    weak = weak_index_two_check(TG, TH, s)
    ok &= all(r["holds"] for r in weak)
    lifts = []
    for sign in (1, -1):
        TH2 = char_table(GroupSpec.standard("Omega", 4, 3, sign))
        TQ = char_table(GroupSpec.standard("POmega", 4, 3, sign), ell=TH2.ell)
        r = lift_check(TQ, TH2)
        ok &= r["holds"]
        lifts.append({"group": TQ.group, "holds": r["holds"]})
    return CriterionResult(9, "character tables and indicators", ok,
                           detail={"tables": tables, "weak_index_two": {"overgroup": TG.group, "subgroup": TH.group,
                                                                         "s": s.tolist(), "rows": weak},
                                   "lift": lifts})


def criterion_10(budget: str = "desk") -> CriterionResult:
    """Out-of-reach items: confirm the library refuses them instead of attempting them."""
    from .characters import char_table
    from .reality import census

    refused = {}
    for label, fn in (("character table of POmega-(6,3) (PSU(4,3))",
                       lambda: char_table(GroupSpec.standard("POmega", 6, 3, -1))),
                      ("census of Omega+(8,2)", lambda: census(GroupSpec.standard("Omega", 8, 2, 1)))):
        try:
            fn()
            refused[label] = False
        except GroupTooLarge as exc:
            refused[label] = exc.to_dict()
    ok = all(v is not False for v in refused.values())
    return CriterionResult(10, "desk-scale limits stated", ok, detail={
        "statement": "Indicator -1 characters of PSU(4,3) and full censuses of groups of order above 10^6 are "
                     "not reproduced; criteria 4-9 and the certificates of criterion 5 stand in for them.",
        "refusals": refused})


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


def run_all(budget: str = "desk", only=None) -> list[CriterionResult]:
    if budget not in BUDGETS:
        raise ValueError(f"unknown budget {budget!r}; expected one of {sorted(BUDGETS)}")
    out = []
    for i, fn in CRITERIA.items():
        if only and i not in only:
            continue
        t0 = time.time()
        r = fn(budget)
        r.seconds = time.time() - t0
        log.info(r.line())
        out.append(r)
    return out
