"""Acceptance suite: twelve numbered criteria at their stated tolerances.

Each test records one ``[PASS]`` or ``[FAIL]`` line, which is echoed in the
pytest terminal summary. Run this file directly to print the lines without
pytest.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from projchar.coxeter import (
    INF,
    CoxeterMatrix,
    bform_residual,
    coxeter_charpoly,
    dihedral,
    hyperplane_equivalence,
    hyperplane_projections,
    involution_residual,
    order_relation_residual,
    recover_coxeter,
    tits_representation,
    type_a,
    type_b,
    type_h3,
)
from projchar.fixtures import (
    make_rng,
    pair_from_invariants,
    random_hermitian_tuple,
    random_invariants,
    random_orthogonal,
    random_projection_pair,
    random_tuple,
    random_unitary,
)
from projchar.linalg import fro, hermitian_eigen
from projchar.pencil import (
    charpoly_det,
    charpoly_ps,
    cofactor_matrix,
    trace_q2,
    pencil_spectrum,
    q_coefficients,
    qkm_via_cofactor,
    z0_expansion,
)
from projchar.poly import max_coeff_diff
from projchar.projpair import (
    HalmosInvariants,
    cpp_polynomial,
    equivalent_pairs,
    generic_position,
    halmos_invariants,
)

RESULTS = []

SEED = 20240611


def report(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _positive_and_negative_pairs():
    rng = make_rng(SEED + 3)
    positive = []
    for _ in range(50):
        k = int(rng.integers(2, 8, endpoint=True))
        a = random_projection_pair(rng, k)
        positive.append((a, a.conjugate(random_unitary(rng, k))))
    rng = make_rng(SEED + 4)
    negative = []
    for _ in range(50):
        k = int(rng.integers(2, 8, endpoint=True))
        inv = random_invariants(rng, k, min_generic=1)
        h = list(inv.h_spectrum)
        i = int(rng.integers(len(h)))
        h[i] += 0.05 if h[i] < 0.5 else -0.05
        inv2 = HalmosInvariants(inv.k1, inv.k2, inv.k3, inv.k4, tuple(h))
        negative.append((pair_from_invariants(rng, inv), pair_from_invariants(rng, inv2)))
    return positive, negative


@pytest.fixture(scope="module")
def pair_sets():
    return _positive_and_negative_pairs()


@pytest.fixture(scope="module")
def verdicts(pair_sets):
    positive, negative = pair_sets
    return [equivalent_pairs(a, b) for a, b in positive], [equivalent_pairs(a, b) for a, b in negative]


def test_criterion_01_dual_algorithm_agreement():
    rng = make_rng(SEED + 1)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 3, endpoint=True))
        k = int(rng.integers(2, 6, endpoint=True))
        t = random_tuple(rng, n, k)
        a, b = charpoly_det(t), charpoly_ps(t)
        scale = 1.0 + max(a.max_modulus(), b.max_modulus())
        worst = max(worst, max_coeff_diff(a, b) / scale)
    elapsed = time.perf_counter() - start
    report(1, worst <= 1e-8 and elapsed <= 10,
           f"200 tuples, worst relative gap {worst:.2e} (<= 1e-8), {elapsed:.2f}s")


def test_criterion_02_closed_form_reconstruction():
    rng = make_rng(SEED + 2)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        k = int(rng.integers(2, 8, endpoint=True))
        pp = random_projection_pair(rng, k)
        closed, direct = cpp_polynomial(halmos_invariants(pp)), charpoly_det(pp.as_tuple())
        worst = max(worst, max_coeff_diff(closed, direct) / (1.0 + direct.max_modulus()))
    elapsed = time.perf_counter() - start
    report(2, worst <= 1e-7 and elapsed <= 10,
           f"100 pairs, worst relative gap {worst:.2e} (<= 1e-7), {elapsed:.2f}s")


def test_criterion_03_conjugated_pairs_equivalent(verdicts):
    pos, _ = verdicts
    accepted = sum(v.equivalent for v in pos)
    wres = max(v.witness_residual for v in pos if v.equivalent)
    ures = max(v.unitary_residual for v in pos if v.equivalent)
    ok = accepted == 50 and wres <= 1e-7 and ures <= 1e-8
    report(3, ok, f"{accepted}/50 accepted, witness residual {wres:.2e}, unitary residual {ures:.2e}")


def test_criterion_04_perturbed_pairs_rejected(pair_sets, verdicts):
    _, neg = verdicts
    rejected = sum(not v.equivalent for v in neg)
    gaps = [max_coeff_diff(charpoly_det(a.as_tuple()), charpoly_det(b.as_tuple())) for a, b in pair_sets[1]]
    ok = rejected == 50 and min(gaps) >= 1e-3
    report(4, ok, f"{rejected}/50 rejected, smallest coefficient gap {min(gaps):.2e} (>= 1e-3)")


def test_criterion_05_criterion_concordance(verdicts):
    pos, neg = verdicts
    divergences = sum(v.poly_equal != v.trace_words_equal for v in pos + neg)
    report(5, divergences == 0, f"{divergences} divergences over {len(pos) + len(neg)} pairs")


def test_criterion_06_odd_size_obstruction():
    rng = make_rng(SEED + 6)
    generic = 0
    for k in (3, 5, 7):
        for _ in range(100):
            generic += generic_position(random_projection_pair(rng, k))
    report(6, generic == 0, f"{generic} of 300 odd-size pairs in generic position")


def test_criterion_07_cofactor_generating_function():
    rng = make_rng(SEED + 7)
    worst_trace, worst_qkm = 0.0, 0.0
    for _ in range(50):
        n = int(rng.integers(1, 3, endpoint=True))
        k = int(rng.integers(2, 5, endpoint=True))
        t = random_tuple(rng, n, k)
        q = charpoly_det(t)
        worst_trace = max(worst_trace, max_coeff_diff(q.partial(0), cofactor_matrix(t).trace()))
        qs = q_coefficients(t)
        for m in range(1, k):
            worst_qkm = max(worst_qkm, max_coeff_diff(qkm_via_cofactor(t, m), qs[k - m]))
    ok = worst_trace <= 1e-9 and worst_qkm <= 1e-9
    report(7, ok, f"50 tuples, dQ/dz0 vs tr C {worst_trace:.2e}, q_(k-m) gap {worst_qkm:.2e} (<= 1e-9)")


def test_criterion_08_pencil_spectrum():
    rng = make_rng(SEED + 8)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 3, endpoint=True))
        k = int(rng.integers(2, 6, endpoint=True))
        t = random_hermitian_tuple(rng, n, k)
        zp = rng.standard_normal(n)
        roots = pencil_spectrum(t, zp)
        eig = hermitian_eigen(t.numeric_pencil(zp)).values
        worst = max(worst, float(np.max(np.abs(np.sort(-roots.real) - eig))), float(np.max(np.abs(roots.imag))))
    report(8, worst <= 1e-6, f"50 Hermitian tuples, worst root/eigenvalue gap {worst:.2e} (<= 1e-6)")


def test_criterion_09_coxeter_round_trip():
    zoo = [type_a(2), type_a(3), type_b(3), type_h3()] + [dihedral(m) for m in range(2, 13)]
    zoo.append(CoxeterMatrix(((1, 3, INF), (3, 1, 2), (INF, 2, 1))))
    exact = sum(recover_coxeter(coxeter_charpoly(cm)) == cm for cm in zoo)
    reps = [(tits_representation(cm), cm) for cm in zoo]
    binv = max(bform_residual(r) for r, _ in reps)
    invol = max(involution_residual(r) for r, _ in reps)
    order = max(order_relation_residual(r, cm) for r, cm in reps)
    ok = exact == len(zoo) and binv <= 1e-10 and invol <= 1e-8 and order <= 1e-8
    report(9, ok, f"{exact}/{len(zoo)} exact round trips, B-invariance {binv:.1e}, "
                  f"involution {invol:.1e}, order relations {order:.1e}")


def test_criterion_10_cross_term_factor_four():
    cases = [type_a(2), dihedral(2), dihedral(4), dihedral(5), dihedral(INF),
             type_a(3), type_b(3), type_h3(), CoxeterMatrix(((1, 3, INF), (3, 1, 2), (INF, 2, 1)))]
    worst_det, worst_trace, worst_naive = 0.0, 0.0, np.inf
    for cm in cases:
        n = cm.n
        q2_det = z0_expansion(coxeter_charpoly(cm), n)[2]
        q2_trace = trace_q2(tits_representation(cm).as_tuple())
        alphas = cm.alphas()
        for i in range(n):
            for j in range(i + 1, n):
                e = tuple(int(x in (i, j)) for x in range(n))
                expected = (n - 2) ** 2 - (n - 4) - 4 * alphas[i, j] ** 2
                worst_det = max(worst_det, abs(q2_det.coeff(e) - expected))
                worst_trace = max(worst_trace, abs(q2_trace.coeff(e) - expected))
                if abs(alphas[i, j]) > 1e-9:
                    naive = (n - 2) ** 2 - (n - 4) - alphas[i, j] ** 2
                    worst_naive = min(worst_naive, abs(q2_det.coeff(e) - naive))
    ok = worst_det <= 1e-9 and worst_trace <= 1e-9 and worst_naive > 1e-3
    report(10, ok, f"determinant gap {worst_det:.1e}, trace-formula gap {worst_trace:.1e}; "
                   f"coefficient without the factor 4 misses by >= {worst_naive:.3f}")


def test_criterion_11_hyperplane_equivalence():
    types = [type_a(2), type_a(3), type_b(3), type_h3(), dihedral(5)]
    rng = make_rng(SEED + 11)
    worst, found = 0.0, 0
    for case in range(20):
        cm = types[case % len(types)]
        t = hyperplane_projections(cm)
        t2 = t.conjugate(random_orthogonal(rng, cm.n))
        u = hyperplane_equivalence(t, t2)
        if u is not None:
            found += 1
            uinv = np.linalg.inv(u)
            worst = max(worst, max(fro(u @ a @ uinv - b) for a, b in zip(t.mats, t2.mats)))
    mismatched = [(type_a(2), dihedral(4)), (type_a(3), type_b(3)), (type_b(3), type_h3()),
                  (dihedral(5), dihedral(6))]
    rejected = sum(hyperplane_equivalence(hyperplane_projections(x), hyperplane_projections(y)) is None
                   for x, y in mismatched)
    ok = found == 20 and worst <= 1e-7 and rejected == len(mismatched)
    report(11, ok, f"{found}/20 witnesses, worst residual {worst:.2e}; "
                   f"{rejected}/{len(mismatched)} mismatched types rejected")


def _cli(*args, cwd):
    return subprocess.run([sys.executable, "-m", "projchar.cli", *map(str, args)],
                          capture_output=True, cwd=cwd)


def _pipeline(workdir):
    workdir.mkdir()
    codes = []
    for kind, args in (("a", ("--seed", 7)), ("c", ("--seed", 8))):
        codes.append(_cli("gen", "random-projection-pair", "--k", 6, *args, "--out", f"{kind}.json",
                          cwd=workdir).returncode)
    codes.append(_cli("gen", "conjugate", "--input", "a.json", "--seed", 9, "--out", "b.json",
                      cwd=workdir).returncode)
    pos = _cli("projpair", "equiv", "a.json", "b.json", "--witness-out", "w.json", cwd=workdir)
    neg = _cli("projpair", "equiv", "a.json", "c.json", cwd=workdir)
    files = {p.name: p.read_bytes() for p in sorted(workdir.iterdir())}
    return codes, pos, neg, files


def test_criterion_12_cli_pipeline(tmp_path):
    codes1, pos1, neg1, files1 = _pipeline(tmp_path / "run1")
    codes2, pos2, neg2, files2 = _pipeline(tmp_path / "run2")
    identical = files1 == files2 and pos1.stdout == pos2.stdout and neg1.stdout == neg2.stdout
    ok = (codes1 == [0, 0, 0] and pos1.returncode == 0 and neg1.returncode == 2
          and json.loads(pos1.stdout)["witness_residual"] <= 1e-7 and identical)
    report(12, ok, f"equiv exit codes {pos1.returncode} (conjugate) and {neg1.returncode} (independent); "
                   f"outputs byte-identical across runs: {identical}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
