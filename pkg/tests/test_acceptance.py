"""End-to-end acceptance checks, one test per advertised guarantee.

Each test prints a single PASS/FAIL line (outside pytest capture, so the
line always reaches the terminal) and then asserts, so a red run still
shows which guarantee broke.  Randomness is seeded per test; no test
depends on another.
"""

import json
import math
from time import perf_counter

import numpy as np
import pytest

from fockband import (CERTIFIED_NO, CERTIFIED_YES, MatrixTuple, ando_complete,
                      bunce_dilate, cuntz_isometries, dual_element,
                      dual_positive, en_decompose, fock_dim,
                      is_dual_row_contraction, joint_numerical_radius,
                      lift_tuple, make_fock, project_tuple, psd_margin,
                      quotient_algebra, theta_embed, variational_check,
                      verify_dilation)
from fockband.cli import RunConfig, _verify_certificate
from fockband.serialize import certificate_to_json, dumps_canonical, loads
from fockband.shorted import block_split

from support import (random_matrix, random_psd, random_psd_arrowhead,
                     random_row_contraction, random_tuple, random_unit_scalars)


def announce(capsys, num, ok, detail, elapsed):
    with capsys.disabled():
        print(f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail} ({elapsed:.2f} s)")


def scalars(*values):
    return MatrixTuple.from_arrays([np.array([[v]], dtype=complex) for v in values])


def test_criterion_1_exact_truncated_relations(capsys):
    start = perf_counter()
    failures = []
    for n in (1, 2, 3):
        for depth in range(1, 6):
            f = make_fock(n, depth)
            iso = cuntz_isometries(f)
            inner = f.inner_dim()
            proj = np.zeros((f.dim, f.dim))
            proj[:inner, :inner] = np.eye(inner)
            for i in range(n):
                for j in range(n):
                    prod = (iso.ops[i].T @ iso.ops[j]).toarray()
                    target = proj if i == j else np.zeros_like(proj)
                    if not np.array_equal(prod, target):
                        failures.append((n, depth, i, j))
    elapsed = perf_counter() - start
    ok = not failures and elapsed < 1.0
    announce(capsys, 1, ok, "truncated isometry relations hold exactly", elapsed)
    assert not failures, failures[:3]
    assert elapsed < 1.0, f"runtime {elapsed:.2f} s exceeds 1 s"


def test_criterion_2_scalar_radius_law(capsys):
    start = perf_counter()
    rng = np.random.default_rng(1002)
    failures = []
    for n in (1, 2, 3):
        t = random_unit_scalars(rng, n)
        previous = 0.0
        for depth in range(1, 9):
            got = joint_numerical_radius(t, depth, theta_points=8).lower
            expected = math.cos(math.pi / (depth + 2))
            if abs(got - expected) > 1e-6:
                failures.append((n, depth, got, expected))
            if got <= previous:
                failures.append((n, depth, "not increasing", got, previous))
            previous = got
    elapsed = perf_counter() - start
    ok = not failures and elapsed < 10.0
    announce(capsys, 2, ok, "unit-scalar radius follows the cosine law", elapsed)
    assert not failures, failures[:3]
    assert elapsed < 10.0, f"runtime {elapsed:.2f} s exceeds 10 s"


def test_criterion_3_dual_row_refutation(capsys):
    start = perf_counter()
    failures = []
    v = is_dual_row_contraction(scalars(1.0), max_depth=8)
    if v.status != CERTIFIED_NO or v.depth > 2:
        failures.append(("unit scalar", v.status, v.depth))
    if abs(v.margin - (1.0 - math.sqrt(2.0))) > 1e-10:
        failures.append(("unit scalar margin", v.margin))
    rng = np.random.default_rng(1003)
    for _ in range(20):
        n = int(rng.integers(1, 4))
        factor = float(rng.uniform(1.05, 2.0))
        t = random_unit_scalars(rng, n).scale(factor)
        verdict = is_dual_row_contraction(t, max_depth=8)
        if verdict.status != CERTIFIED_NO or verdict.depth > 8:
            failures.append((n, factor, verdict.status, verdict.depth))
    elapsed = perf_counter() - start
    ok = not failures and elapsed < 5.0
    announce(capsys, 3, ok, "over-norm tuples are refuted at shallow depth", elapsed)
    assert not failures, failures[:3]
    assert elapsed < 5.0, f"runtime {elapsed:.2f} s exceeds 5 s"


def test_criterion_4_completion_soundness(capsys):
    start = perf_counter()
    rng = np.random.default_rng(1004)
    failures = []
    cfg = RunConfig()
    scaled_tuples = []
    for k in range(100):
        n = int(rng.integers(1, 4))
        p = int(rng.integers(1, 4))
        t = random_tuple(rng, n, p)
        w6 = joint_numerical_radius(t, 6, theta_points=24).lower
        t = t.scale(0.40 / w6)
        scaled_tuples.append(t)
        cert = ando_complete(t, depth=6)
        if not np.array_equal(cert.a + cert.b, np.eye(p, dtype=np.complex128)):
            failures.append((k, "a+b"))
        if float(np.linalg.eigvalsh(cert.a)[0]) <= 0.0:
            failures.append((k, "a margin"))
        if float(np.linalg.eigvalsh(cert.b)[0]) <= 0.0:
            failures.append((k, "b margin"))
        if cert.margin < -1e-8:
            failures.append((k, "arrowhead margin", cert.margin))
        wire = loads(dumps_canonical(certificate_to_json(cert)))
        code, report = _verify_certificate(wire, cfg)
        if code != 0 or not report["valid"]:
            failures.append((k, "verify", report))
    for k in range(0, 100, 10):
        w = joint_numerical_radius(scaled_tuples[k], 6, theta_points=24).lower
        if abs(w - 0.40) > 0.01:
            failures.append((k, "target radius", w))
    elapsed = perf_counter() - start
    ok = not failures and elapsed < 120.0
    announce(capsys, 4, ok, "100 radius-0.40 tuples certify and re-verify", elapsed)
    assert not failures, failures[:3]
    assert elapsed < 120.0, f"runtime {elapsed:.2f} s exceeds 120 s"


def test_criterion_5_scalar_completion_envelope(capsys):
    start = perf_counter()
    cert = ando_complete(scalars(0.4))
    b = float(cert.b[0, 0].real)
    ok = 0.2 - 1e-6 <= b <= 0.8 + 1e-6
    elapsed = perf_counter() - start
    announce(capsys, 5, ok, "scalar completion lands in the feasibility interval", elapsed)
    assert ok, f"b = {b} outside [0.2, 0.8]"


def test_criterion_6_pattern_certificates(capsys):
    start = perf_counter()
    rng = np.random.default_rng(1006)
    failures = []
    for k in range(100):
        n = int(rng.integers(1, 5))
        p = int(rng.integers(1, 5))
        e = random_psd_arrowhead(rng, n, p)
        scale = max(1.0, float(np.linalg.norm(e.matrix(), 2)))
        if float(np.linalg.eigvalsh(e.matrix())[0]) < -1e-10 * scale:
            failures.append((k, "sampler not psd"))
            continue
        dec = en_decompose(e, epsilon=1e-6)
        if psd_margin(dec.P).min_eigenvalue < -1e-12:
            failures.append((k, "P not psd"))
        if psd_margin(dec.Q).min_eigenvalue < -1e-10 * scale:
            failures.append((k, "Q not psd"))
        shifted = e.matrix() + 1e-6 * np.eye((e.n + 1) * e.p)
        gap = float(np.linalg.norm(dec.reconstruction() - shifted, 2))
        if gap > 1e-10 * max(1.0, float(np.linalg.norm(shifted, 2))):
            failures.append((k, "reconstruction", gap))
    elapsed = perf_counter() - start
    ok = not failures and elapsed < 30.0
    announce(capsys, 6, ok, "100 arrowhead elements decompose against the fixed pattern", elapsed)
    assert not failures, failures[:3]
    assert elapsed < 30.0, f"runtime {elapsed:.2f} s exceeds 30 s"


def test_criterion_7_dual_order_isomorphism(capsys):
    start = perf_counter()
    rng = np.random.default_rng(1007)
    disagreements = []
    for k in range(200):
        p = int(rng.integers(1, 5))
        n = int(rng.integers(1, 4))
        target = float(rng.choice([0.3, 0.8, 1.0, 1.2, 2.0]))
        arms = [random_matrix(rng, p) for _ in range(n)]
        gram = sum(m @ m.conj().T for m in arms)
        top = float(np.sqrt(np.linalg.eigvalsh(gram)[-1].real))
        arms = [m * (target / top) for m in arms]
        d = dual_element(np.eye(p), arms)
        verdict = dual_positive(d, tol=1e-9)
        embed_psd = psd_margin(theta_embed(d)).min_eigenvalue >= -1e-9
        if (verdict.status == CERTIFIED_YES) != embed_psd:
            disagreements.append((k, p, n, target, verdict.status, embed_psd))
    elapsed = perf_counter() - start
    ok = not disagreements
    announce(capsys, 7, ok, "200 dual elements agree with the arrowhead eigenfloor", elapsed)
    assert not disagreements, disagreements[:3]


def test_criterion_8_variational_identity(capsys):
    start = perf_counter()
    rng = np.random.default_rng(1008)
    failures = []
    total_trials = 0
    for k in range(100):
        dim = int(rng.integers(2, 11))
        rank = dim - 1 if k % 5 == 0 else dim
        a = random_psd(rng, dim, rank=rank)
        cut = int(rng.integers(1, dim))
        x = rng.standard_normal(cut) + 1j * rng.standard_normal(cut)
        rep = variational_check(block_split(a, cut), x, trials=100, rng=rng)
        total_trials += rep.trials
        if not rep.consistent(1e-8):
            failures.append((k, dim, cut, rep.short_value, rep.closed_form_min,
                             rep.best_sampled))
    elapsed = perf_counter() - start
    ok = not failures and total_trials == 10_000
    announce(capsys, 8, ok, "shorted quadratic form is the sampled infimum", elapsed)
    assert total_trials == 10_000
    assert not failures, failures[:3]


def test_criterion_9_dilation_relations(capsys):
    start = perf_counter()
    rng = np.random.default_rng(1009)
    failures = []
    for k in range(50):
        n = int(rng.integers(1, 4))
        p = int(rng.integers(1, 4))
        norm = float(rng.uniform(0.5, 1.0))
        t = random_row_contraction(rng, n, p, norm=norm)
        rep = verify_dilation(bunce_dilate(t, depth=4), t, max_word=3)
        if rep.isometry_deviation > 1e-10:
            failures.append((k, "isometry", rep.isometry_deviation))
        if rep.compression_deviation > 1e-9:
            failures.append((k, "compression", rep.compression_deviation))
    elapsed = perf_counter() - start
    ok = not failures
    announce(capsys, 9, ok, "50 row contractions dilate to orthogonal-range isometries", elapsed)
    assert not failures, failures[:3]


def test_criterion_10_radius_preserving_lifts(capsys):
    start = perf_counter()
    rng = np.random.default_rng(1010)
    failures = []
    for k in range(50):
        blocks = int(rng.integers(2, 4))
        sizes = [int(rng.integers(1, 3)) for _ in range(blocks)]
        keep = int(rng.integers(0, blocks))
        ideal = [j for j in range(blocks) if j != keep and rng.random() < 0.5]
        if not ideal:
            ideal = [(keep + 1) % blocks]
        q = quotient_algebra(sizes, ideal)
        n = int(rng.integers(1, 3))
        mats = []
        for _ in range(n):
            m = np.zeros((q.quotient_size, q.quotient_size), dtype=np.complex128)
            off = 0
            for j, s in enumerate(sizes):
                if j not in q.ideal:
                    m[off:off + s, off:off + s] = random_matrix(rng, s, scale=0.3)
                    off += s
            mats.append(m)
        t = MatrixTuple.from_arrays(mats)
        res = lift_tuple(q, t, depth=5, theta_points=16)
        back = project_tuple(q, res.lifted)
        if any(not np.array_equal(m, m2) for m, m2 in zip(t.a, back.a)):
            failures.append((k, "projection not exact"))
        if res.max_gap > 1e-10:
            failures.append((k, "radius gap", res.max_gap))
    elapsed = perf_counter() - start
    ok = not failures
    announce(capsys, 10, ok, "50 quotient tuples lift with the radius intact", elapsed)
    assert not failures, failures[:3]
