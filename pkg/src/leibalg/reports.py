"""Report pipelines behind the CLI commands.

Each builder returns ``(ok, report)`` where ``report`` is a JSON-ready dict
with canonical orderings only, so that the serialised output is stable
byte for byte. ``ok`` covers implementation checks; the ``audit`` sections
record claims that are measured but never pass/fail.
"""

from __future__ import annotations

import random

from . import autgroup as ag
from .errors import FieldTooLarge, NotFactorable, ShapeUnsupported
from .exactfield import Field, FieldElement, enumerate_elements
from .grouptool import (MatrixGroupSet, analyze, certify_decomposition, hom_check, iso_to_cyclic,
                        set_product)
from .leibniz import Algebra, check_leibniz, invariants, make_L1, make_L2
from .linalg import SquareMatrix, mat_det, mat_mul

# exhaustive pairwise group checks above this order are replaced by sampling
EXHAUSTIVE_LIMIT = 500
SAMPLE_PAIRS = 2000

L2_NOTATION = ("beta is also written beta_1 (or beta_2), sigma is also written beta_2 (or beta_3); "
               "matrix rows (1,0,0), (0,beta,0), (beta-1,sigma,beta)")


def coverage_text(product: MatrixGroupSet, G: MatrixGroupSet) -> str:
    return f"{sum(1 for g in product if g in G)}/{G.order}"


def build_algebra(name: str, field: Field, lam=None) -> Algebra:
    if name == "L1":
        return make_L1(field)
    return make_L2(field, lam)


# ---------------------------------------------------------------------------
# check


def check_report(L: Algebra, name: str | None, lam: FieldElement | None = None) -> tuple[bool, dict]:
    violation = check_leibniz(L)
    report = {
        "command": "check",
        "algebra": {
            "name": name,
            "lambda": lam.to_json() if lam is not None else None,
            "structure": L.to_json(),
        },
        "leibniz": {
            "holds": violation is None,
            "violation": None if violation is None else {
                "triple": list(violation.triple),
                "lhs": violation.lhs.to_json(),
                "rhs": violation.rhs.to_json(),
                "text": str(violation),
            },
        },
    }
    if violation is not None:
        return False, report
    inv = invariants(L)
    report["invariants"] = inv.to_json()
    if name in ("L1", "L2"):
        report["audit"] = {
            "right_center": {"claimed": "<0>", "computed": inv.right_center.describe(),
                             "matches_claim": inv.right_center.dim == 0},
            "center": {"claimed": "<0>", "computed": inv.center.describe(),
                       "matches_claim": inv.center.dim == 0},
            "note": "right center computed as {x : [y, x] = 0 for all y}",
        }
    return True, report


# ---------------------------------------------------------------------------
# aut


def _sample_pairs(G: MatrixGroupSet, k: int) -> list[tuple[SquareMatrix, SquareMatrix]]:
    rng = random.Random(0)
    elems = G.elements
    return [(rng.choice(elems), rng.choice(elems)) for _ in range(k)]


def _phi_check(G: MatrixGroupSet, codomain: MatrixGroupSet) -> dict:
    if len(G) <= EXHAUSTIVE_LIMIT:
        hc = hom_check(G, ag.phi_L1, codomain)
        return {"mode": "exhaustive", **hc.to_json(), "isomorphism": hc.isomorphism}
    images = {g: ag.phi_L1(g) for g in G}
    hom = all(ag.phi_L1(mat_mul(a, b)) == mat_mul(images[a], images[b]) for a, b in _sample_pairs(G, SAMPLE_PAIRS))
    image_set = set(images.values())
    injective = len(image_set) == len(G)
    surjective = image_set == set(codomain.elements)
    return {"mode": f"sampled({SAMPLE_PAIRS} pairs)", "homomorphism": hom, "injective": injective,
            "surjective": surjective, "isomorphism": hom and injective and surjective}


def _group_summary(G: MatrixGroupSet) -> dict:
    if len(G) <= EXHAUSTIVE_LIMIT:
        r = analyze(G)
        out = {"mode": "exhaustive", "is_group": r.is_group, "abelian": r.abelian}
        if r.abelian_failure:
            out["noncommuting_witness"] = [m.to_json() for m in r.abelian_failure.elements]
        return out
    # a witness of non-commutativity is decisive; search in canonical order
    for i, a in enumerate(G.elements):
        for b in G.elements[i + 1:]:
            if mat_mul(a, b) != mat_mul(b, a):
                return {"mode": "witness-search", "is_group": None, "abelian": False,
                        "noncommuting_witness": [a.to_json(), b.to_json()]}
    return {"mode": "witness-search", "is_group": None, "abelian": True}


def l1_factorization_audit(family: MatrixGroupSet, C1: MatrixGroupSet, C2: MatrixGroupSet) -> tuple[dict, dict]:
    """Recompose g = c2 c1 where the formula applies, and measure C2 C1 coverage."""
    recomposed = 0
    not_factorable = []
    for g in family:
        try:
            c2, c1 = ag.factor_c2c1(g)
        except NotFactorable:
            not_factorable.append(g)
            continue
        if mat_mul(c2, c1) == g and c2 in C2 and c1 in C1:
            recomposed += 1
    factorable = family.order - len(not_factorable)
    c2c1 = set_product(C2, C1)
    c1c2 = set_product(C1, C2)
    uncovered = [g for g in family if g not in c2c1]
    witness = uncovered[0] if uncovered else None
    audit = {
        "claim": "G = C1 C2 as a product of subgroups",
        "C2C1_coverage": coverage_text(c2c1, family),
        "C1C2_coverage": coverage_text(c1c2, family),
        "C2C1_covers": len(uncovered) == 0,
        "first_uncovered": None if witness is None else {
            "matrix": witness.to_json(),
            "params": ag.family1_params(witness).to_json(),
        },
        "generated_subgroup_is_G": _generates(C1.elements + C2.elements, family),
    }
    factorization = {
        "factorable": factorable,
        "recomposed": recomposed,
        "not_factorable": len(not_factorable),
        "all_factorable_recompose": recomposed == factorable,
    }
    return factorization, audit


def aut_L1_report(field: Field, workers: int = 1) -> tuple[bool, dict]:
    p = field.order
    L = make_L1(field)
    family = ag.family1_set(field)
    pruned = ag.enumerate_aut_pruned(L, workers)
    brute = ag.enumerate_aut_bruteforce(L, workers) if p <= ag.BRUTE_FORCE_MAX_P else None
    gl2 = ag.gl2_set(field)
    expected = (p * p - 1) * (p * p - p)

    oracles = {
        "family_order": family.order,
        "pruned_order": pruned.order,
        "bruteforce_order": brute.order if brute else None,
        "gl2_order": gl2.order,
        "expected_order": expected,
        "family_equals_pruned": family.same_elements(pruned),
        "bruteforce_equals_pruned": brute.same_elements(pruned) if brute else None,
        "order_matches_gl2": family.order == gl2.order == expected,
    }
    phi = _phi_check(family, gl2)
    det_transport = all(mat_det(g) == mat_det(ag.phi_L1(g)) for g in family)
    preimage_roundtrip = all(ag.phi_L1(ag.phi_L1_inverse(h)) == h and ag.phi_L1_inverse(h) in family
                             for h in gl2)

    C1 = ag.centralizer_of_basis(L, family, 1, check_group=False)
    C2 = ag.centralizer_of_basis(L, family, 2, check_group=False)
    C3, C4 = ag.c3_set(field), ag.c4_set(field)
    semi_c1 = certify_decomposition("Semidirect", C3, C4, C1)
    c2_normal = C2.filter(lambda g: not g[2, 0])          # alpha3 = 0
    c2_torus = C2.filter(lambda g: not g[1, 0])           # alpha2 = 0
    semi_c2 = certify_decomposition("Semidirect", c2_normal, c2_torus, C2)
    phi_c2 = hom_check(C2, ag.phi_L1, ag.unit_upper_triangular_2x2(field))

    subgroups = {
        "C1": {"order": C1.order, "matches_template": C1.same_elements(ag.c1_template_set(field))},
        "C2": {"order": C2.order, "matches_template": C2.same_elements(ag.c2_template_set(field))},
        "C1_semidirect_C3_C4": semi_c1.to_json(),
        "C3_cyclic_order_p": iso_to_cyclic(C3, p).to_json(),
        "C4_cyclic_order_p_minus_1": iso_to_cyclic(C4, p - 1).to_json(),
        "C2_semidirect": semi_c2.to_json(),
        "C2_phi_onto_unit_upper_triangular": {**phi_c2.to_json(), "isomorphism": phi_c2.isomorphism},
    }

    factorization, audit = l1_factorization_audit(family, C1, C2)

    group = _group_summary(family)
    ok = (oracles["family_equals_pruned"] and oracles["bruteforce_equals_pruned"] is not False
          and oracles["order_matches_gl2"] and phi["isomorphism"] and det_transport and preimage_roundtrip
          and subgroups["C1"]["matches_template"] and subgroups["C2"]["matches_template"]
          and semi_c1.certified and semi_c2.certified and phi_c2.isomorphism
          and subgroups["C3_cyclic_order_p"]["cyclic"] and subgroups["C4_cyclic_order_p_minus_1"]["cyclic"]
          and factorization["all_factorable_recompose"] and group["abelian"] is False)
    report = {
        "command": "aut",
        "algebra": "L1",
        "field": field.descriptor,
        "order": family.order,
        "oracles": oracles,
        "group": group,
        "phi": {**phi, "det_transport": det_transport, "preimage_roundtrip": preimage_roundtrip},
        "subgroups": subgroups,
        "factorization": factorization,
        "audit": audit,
        "ok": ok,
    }
    return ok, report


def _generates(gens, G: MatrixGroupSet) -> bool:
    """Whether ``gens`` generate all of ``G`` (closure by breadth-first products)."""
    seen = set(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = mat_mul(a, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen == set(G.elements)


def aut_L2_report(field: Field, lam: FieldElement, workers: int = 1) -> tuple[bool, dict]:
    p = field.order
    L = make_L2(field, lam)
    family = ag.family2_set(field)
    pruned = ag.enumerate_aut_pruned(L, workers)
    brute = ag.enumerate_aut_bruteforce(L, workers) if p <= ag.BRUTE_FORCE_MAX_P else None
    oracles = {
        "family_order": family.order,
        "pruned_order": pruned.order,
        "bruteforce_order": brute.order if brute else None,
        "expected_order": p * (p - 1),
        "family_equals_pruned": family.same_elements(pruned),
        "bruteforce_equals_pruned": brute.same_elements(pruned) if brute else None,
    }
    report_g = analyze(family)
    C, A = ag.l2_decomposition(family)
    C_fix_e3 = ag.centralizer_of_basis(L, family, 3, check_group=False)
    direct = certify_decomposition("Direct", C, A, family)
    c_cyc = iso_to_cyclic(C, p)
    a_cyc = iso_to_cyclic(A, p - 1)
    factor_ok = True
    for g in family:
        a, c = ag.l2_factor(g)
        factor_ok &= mat_mul(a, c) == g and a in A and c in C
    ok = (oracles["family_equals_pruned"] and oracles["bruteforce_equals_pruned"] is not False
          and family.order == p * (p - 1) and report_g.is_group and report_g.abelian
          and C.same_elements(C_fix_e3) and direct.certified and bool(c_cyc) and bool(a_cyc) and factor_ok)
    report = {
        "command": "aut",
        "algebra": "L2",
        "lambda": lam.to_json(),
        "field": field.descriptor,
        "order": family.order,
        "oracles": oracles,
        "group": {"mode": "exhaustive", "is_group": report_g.is_group, "abelian": report_g.abelian},
        "subgroups": {
            "C": {"order": C.order, "equals_centralizer_of_e3": C.same_elements(C_fix_e3)},
            "A": {"order": A.order},
            "direct_product_C_A": direct.to_json(),
            "C_cyclic_order_p": c_cyc.to_json(),
            "A_cyclic_order_p_minus_1": a_cyc.to_json(),
            "every_element_is_a_times_c": factor_ok,
        },
        "notation": L2_NOTATION,
        "ok": ok,
    }
    return ok, report


def aut_generic_report(L: Algebra, workers: int = 1) -> tuple[bool, dict]:
    """Enumeration-only report for an algebra read from a file."""
    p = L.field.order
    pruned = None
    try:
        pruned = ag.enumerate_aut_pruned(L, workers)
    except ShapeUnsupported:
        pass
    brute = ag.enumerate_aut_bruteforce(L, workers) if p <= ag.BRUTE_FORCE_MAX_P else None
    if pruned is None and brute is None:
        raise FieldTooLarge("no enumeration applies: shape unsupported for pruning and p > 3")
    G = brute or pruned
    ok = pruned is None or brute is None or brute.same_elements(pruned)
    return ok, {
        "command": "aut",
        "algebra": "file",
        "field": L.field.descriptor,
        "order": G.order,
        "oracles": {
            "pruned_order": pruned.order if pruned else None,
            "bruteforce_order": brute.order if brute else None,
            "bruteforce_equals_pruned": (brute.same_elements(pruned) if brute and pruned else None),
        },
        "group": _group_summary(G),
        "elements": G.to_json()["elements"] if G.order <= EXHAUSTIVE_LIMIT else None,
        "ok": ok,
    }


# ---------------------------------------------------------------------------
# sweep


def sweep_rows(algebras: list[str], primes: list[int], workers: int = 1) -> tuple[bool, dict]:
    rows = []
    lambda_independent = {}
    ok_all = True
    for name in algebras:
        for p in primes:
            field = Field.gf(p)
            if name == "L1":
                ok, rep = aut_L1_report(field, workers)
                ok_all &= ok
                rows.append({
                    "algebra": "L1", "field": field.descriptor, "lambda": None,
                    "order": rep["order"], "expected_order": rep["oracles"]["expected_order"],
                    "family_equals_pruned": rep["oracles"]["family_equals_pruned"],
                    "bruteforce_equals_pruned": rep["oracles"]["bruteforce_equals_pruned"],
                    "abelian": rep["group"]["abelian"],
                    "phi_isomorphism": rep["phi"]["isomorphism"],
                    "C1_semidirect_C3_C4": rep["subgroups"]["C1_semidirect_C3_C4"]["certified"],
                    "C2C1_coverage": rep["audit"]["C2C1_coverage"],
                    "ok": ok,
                })
                continue
            sets = []
            for lam in enumerate_elements(field)[1:]:
                ok, rep = aut_L2_report(field, lam, workers)
                ok_all &= ok
                sets.append(ag.enumerate_aut_pruned(make_L2(field, lam), workers).elements)
                rows.append({
                    "algebra": "L2", "field": field.descriptor, "lambda": lam.to_json(),
                    "order": rep["order"], "expected_order": rep["oracles"]["expected_order"],
                    "family_equals_pruned": rep["oracles"]["family_equals_pruned"],
                    "bruteforce_equals_pruned": rep["oracles"]["bruteforce_equals_pruned"],
                    "abelian": rep["group"]["abelian"],
                    "direct_C_A": rep["subgroups"]["direct_product_C_A"]["certified"],
                    "ok": ok,
                })
            same = all(s == sets[0] for s in sets)
            lambda_independent[field.descriptor] = same
            ok_all &= same
    return ok_all, {"command": "sweep", "rows": rows, "L2_lambda_independent": lambda_independent,
                    "ok": ok_all}


SWEEP_COLUMNS = ("algebra", "field", "lambda", "order", "expected_order", "family_equals_pruned",
                 "bruteforce_equals_pruned", "abelian", "ok")


def sweep_table(report: dict) -> str:
    def cell(v):
        if v is None:
            return "-"
        return str(v).lower() if isinstance(v, bool) else str(v)

    cols = SWEEP_COLUMNS + ("extra",)
    lines = []
    for r in report["rows"]:
        extra = (f"phi_iso={cell(r['phi_isomorphism'])} C3xC4={cell(r['C1_semidirect_C3_C4'])} "
                 f"C2C1={r['C2C1_coverage']}" if r["algebra"] == "L1" else f"CxA={cell(r['direct_C_A'])}")
        lines.append([cell(r[c]) for c in SWEEP_COLUMNS] + [extra])
    widths = [max(len(c), *(len(l[i]) for l in lines)) if lines else len(c) for i, c in enumerate(cols)]
    out = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    out += ["  ".join(v.ljust(w) for v, w in zip(l, widths)).rstrip() for l in lines]
    for fd, same in report["L2_lambda_independent"].items():
        out.append(f"L2 over {fd}: automorphism group identical for all lambda: {cell(same)}")
    out.append(f"overall: {'ok' if report['ok'] else 'MISMATCH'}")
    return "\n".join(out)
