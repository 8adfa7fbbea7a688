"""
Acceptance suite.  Each test prints one ``PASS criterion N: ...`` or
``FAIL criterion N: ...`` line and then asserts, so the verdicts show up in
``pytest -v`` output and when the file is run directly as a script.
All comparisons are exact rational equalities.
"""

import random
import sys
from fractions import Fraction
from itertools import product

import pytest

from confjord.conformal_kernel.affine import (KAPPA, AffineSl, Virasoro, check_delta_identity, check_loop_recovery,
                                              delta_coefficient, loop_reference, witt_reference)
from confjord.conformal_kernel.algebra import builtin_mutants, make_sl2_current, make_witt, sl2_structure_constants
from confjord.conformal_kernel.axioms import (check_jacobi, check_on_generators, check_skew, check_translation,
                                              check_weight_grading)
from confjord.fermionic_fock import check_action_identities, check_component_paths, check_unit_ideal, oracle_suite
from confjord.matrix_family.elements import MatElement, MatrixConformalAlgebra
from confjord.matrix_family.families import (FamilyKind, closure_check, generation_check, ideal_probe,
                                             random_family_element)
from confjord.matrix_family.jordan import check_jordan, check_lie, identify_model
from confjord.report import VerificationReport

CLOSURE_CONFIGS = [(kind, k, L) for kind, ks in (("full", (2, 3)), ("star", (2, 3)), ("dagger", (2, 4)))
                   for k in ks for L in (1, 2, 3)]


VERDICTS = []


def verdict(n, ok, message):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {message}"
    VERDICTS.append((n, line))
    print(line)
    assert ok, line


def test_criterion_01_matrix_axioms():
    notes, ok = [], True
    for k in (2, 3):
        alg = MatrixConformalAlgebra(k, 3)
        rep = VerificationReport("criterion1")
        rep.absorb(check_translation(alg, 2), "translation")
        # every element E_ij(m1, m2) with both bidegree entries <= 3
        elements = [MatElement.unit(k, i, j, m1, m2) for m1, m2 in product(range(4), repeat=2)
                    for i in range(1, k + 1) for j in range(1, k + 1)]
        for a, b in product(elements, repeat=2):
            check_skew(alg, a, b, report=rep)
        # E_ij(0, n), n <= 3, generate R over F[d]
        for a, b, c in product(alg.generators(), repeat=3):
            check_jacobi(alg, a, b, c, report=rep)
        rep.finish()
        ok = ok and rep.passed and rep.checks_run >= 10 ** 4
        notes.append(f"k={k} {rep.checks_run} equalities, {rep.failure_count} failures")
    verdict(1, ok, "skew/Jacobi on R_kxk via residue and component paths; " + "; ".join(notes))


def test_criterion_02_generator_vs_extended():
    notes, ok = [], True
    for alg in (make_witt(), make_sl2_current(), MatrixConformalAlgebra(2, 1)):
        rep = check_on_generators(alg, depth=2)
        tr = check_translation(alg, 3)
        good = (rep.details["generator_verdict"] == rep.details["extended_verdict"] == "pass") and tr.passed
        ok = ok and good
        notes.append(f"{alg.label}: {rep.details['generator_verdict']}/{rep.details['extended_verdict']}"
                     f" translation {tr.status}")
    for name, alg in builtin_mutants().items():
        rep = check_on_generators(alg, depth=2)
        bad = rep.details["generator_verdict"] == rep.details["extended_verdict"] == "fail"
        ok = ok and bad
        notes.append(f"{name}: {rep.details['generator_verdict']}/{rep.details['extended_verdict']}")
    verdict(2, ok, "; ".join(notes))


def test_criterion_03_loop_recovery():
    w = check_loop_recovery(make_witt(), 6, witt_reference)
    s = check_loop_recovery(make_sl2_current(), 6, loop_reference(sl2_structure_constants()[1]))
    ok = w.passed and s.passed
    verdict(3, ok, f"window 6: Witt {w.details['brackets_compared']} brackets ({w.status}),"
                   f" sl2 {s.details['brackets_compared']} brackets ({s.status})")


def test_criterion_04_delta_identities():
    sl2 = check_delta_identity(AffineSl(2), 4)
    vir = check_delta_identity(Virasoro(), 4)
    k2 = delta_coefficient(Virasoro(), 4, 2, -2)[KAPPA]
    k1 = delta_coefficient(Virasoro(), 4, 1, -1)[KAPPA]
    # (j^3 - j)/12 across the whole window
    curve = all(delta_coefficient(Virasoro(), 4, j, -j)[KAPPA] == Fraction(j ** 3 - j, 12) for j in range(-4, 5))
    ok = sl2.passed and vir.passed and k2 == Fraction(1, 2) and k1 == 0 and curve
    verdict(4, ok, f"sl2 {sl2.checks_run} coefficients ({sl2.status}), Virasoro {vir.checks_run} ({vir.status}),"
                   f" kappa(2)={k2} kappa(1)={k1}")


def test_criterion_05_closure():
    notes, ok, counts = [], True, []
    for kind, k, L in CLOSURE_CONFIGS:
        rep = closure_check(FamilyKind(kind, L, k), 6)
        good = rep.passed and rep.checks_run >= 10 ** 3
        ok = ok and good
        counts.append(rep.checks_run)
        if not good:
            notes.append(f"{kind} k={k} L={L}: {rep.checks_run} checks, {rep.failure_count} failures")
    verdict(5, ok, f"{len(CLOSURE_CONFIGS)} families to weight 6, {min(counts)}..{max(counts)} membership checks each"
            + ("; " + "; ".join(notes) if notes else ""))


def test_criterion_06_simplicity_probes():
    bad = []
    for kind, k, L in CLOSURE_CONFIGS:
        f = FamilyKind(kind, L, k)
        for i in range(20):
            rng = random.Random(1000 * i + 7)
            seed = random_family_element(f, rng, f.L, 5)
            if not ideal_probe(f, seed, 5).passed:
                bad.append(f"{kind} k={k} L={L} seed {i}")
    verdict(6, not bad, f"{20 * len(CLOSURE_CONFIGS)} probes saturate to weight 5"
            + (": failed " + ", ".join(bad) if bad else ""))


JORDAN = [("full", 2, "JordanA"), ("full", 3, "JordanA"), ("star", 2, "JordanB"), ("star", 3, "JordanB"),
          ("dagger", 2, "JordanC"), ("dagger", 4, "JordanC")]


def test_criterion_07_jordan():
    notes, ok = [], True
    for kind, k, label in JORDAN:
        matches = []
        for L in (2, 4):
            f = FamilyKind(kind, L, k)
            rep = check_jordan(f, random_samples=50)
            ok = ok and rep.passed
            matches.append(identify_model(f))
        good = all(m is not None and m.label == label for m in matches) and matches[0].label == matches[1].label
        if kind == "full":
            good = good and all(m.scale == -1 for m in matches)
        ok = ok and good
        notes.append(f"{kind} k={k}: {[m and (m.label, str(m.scale)) for m in matches]}")
    verdict(7, ok, "; ".join(notes))


LIE = [("full", 2, "gl"), ("full", 3, "gl"), ("star", 2, "o"), ("star", 3, "o"), ("dagger", 4, "sp")]


def test_criterion_08_lie():
    notes, ok = [], True
    for kind, k, label in LIE:
        matches = []
        for L in (1, 3):
            f = FamilyKind(kind, L, k)
            ok = ok and check_lie(f, random_samples=50).passed
            matches.append(identify_model(f))
        good = all(m is not None and m.label == label for m in matches)
        ok = ok and good
        notes.append(f"{kind} k={k}: {[m and (m.label, str(m.scale)) for m in matches]}")
    verdict(8, ok, "; ".join(notes))


def test_criterion_09_generation():
    notes, ok = [], True
    for kind, k in (("full", 2), ("star", 2), ("dagger", 4)):
        f = FamilyKind(kind, 2, k)
        rep = generation_check(f, f.L + 3)
        good = rep.passed and rep.details["dims"] == rep.details["target_dims"]
        if kind == "full":
            # k^2 * (w - 1) lattice points (m1, m2) with m2 >= 1 at weight w
            good = good and rep.details["dims"] == {str(w): 4 * (w - 1) for w in range(2, 6)}
        ok = ok and good
        notes.append(f"{kind} k={k}: {rep.details['dims']}")
    verdict(9, ok, "; ".join(notes))


def test_criterion_10_fermionic_oracle():
    reps = [check_action_identities(rank=r, max_mode=2) for r in (1, 2)]
    reps.append(check_component_paths(rank=2, max_mn=2, max_c=4))
    reps.append(check_unit_ideal(rank=2, max_mode=2))
    cmp = oracle_suite(r=2, max_mode=2)
    reps.append(cmp)
    ok = all(r.passed for r in reps) and cmp.details["distinct_scalars"] == ["1"]
    verdict(10, ok, f"{sum(r.checks_run for r in reps)} checks; {cmp.details['bidegrees_compared']} bidegrees,"
                    f" measured scalars {cmp.details['distinct_scalars']}")


def test_criterion_11_grading():
    notes, ok = [], True
    for k in (2, 3):
        rep = check_weight_grading(MatrixConformalAlgebra(k, 7), 8)
        good = rep.passed and rep.details["N0"] == k * k
        ok = ok and good
        notes.append(f"k={k}: {rep.checks_run} shifts, N0={rep.details['N0']}")
    verdict(11, ok, "; ".join(notes))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
