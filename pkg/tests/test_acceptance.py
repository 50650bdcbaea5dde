"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every tolerance is pinned here, nothing is deferred.
"""
import math
import time
from fractions import Fraction as F
from pathlib import Path

from cyclochern.chains import co_b, co_T, cochain_is_normalized, connes_B
from cyclochern.geometry import Isometry, parse_form
from cyclochern.homology import full_route_allowed, hp_report, verify_pi_star
from cyclochern.scalars import Scalar
from cyclochern.spectral import (
    conformal_deform,
    conjugated_cochain,
    tau_bar_chern_pairing,
    tau_coefficient,
    unitary_conjugate,
    verify_index_pairing,
)
from cyclochern.suite import (
    DEFAULT_SCENARIOS,
    SCENARIOS,
    TRIPLES,
    asym_triple,
    micro_triple,
    s2_rotation_scenario,
    t2_scenario,
    z2_swap_scenario,
)
from cyclochern.verify import chern_suite, cyclic_suite

REPO = Path(__file__).resolve().parent.parent


def report(num, name, ok, extra=""):
    line = f"[acceptance {num:2d}] {'PASS' if ok else 'FAIL'}  {name}"
    if extra:
        line += f"  ({extra})"
    print(line)
    assert ok, f"acceptance criterion {num} failed: {name}"


def test_criterion_01_operator_identities():
    t0 = time.time()
    ok = True
    for name in DEFAULT_SCENARIOS:
        cpa = SCENARIOS[name]()
        checks = cyclic_suite(cpa, seed=7, samples=102, max_degree=6)
        core = [c for c in checks if c.name in (
            "b^2 = 0", "B^2 = 0", "bB + Bb = 0", "T^(m+1) = id",
            "A(1 - T) = 0", "theta^2 = theta")]
        ok &= all(c.passed for c in core)
    elapsed = time.time() - t0
    report(1, "exact operator identities, >=100 chains/scenario, degrees <= 6",
           ok and elapsed < 60, f"{elapsed:.1f}s < 60s")


def test_criterion_02_chern_cycle():
    cpa = z2_swap_scenario()
    checks = chern_suite(cpa, seed=11, count=10, q_max=3)
    report(2, "(b+B)Ch(e) = 0 in normalized quotient, 10 idempotents, q_max=3",
           all(c.passed for c in checks))


def test_criterion_03_brylinski_nistor():
    t0 = time.time()
    ok = True
    details = []
    for name in DEFAULT_SCENARIOS:
        cpa = SCENARIOS[name]()
        totals = {}
        for flavor in ("twisted", "g-normalized") + (
                ("full",) if full_route_allowed(cpa) else ()):
            rep0 = hp_report(cpa, flavor, 0, 1, name)
            rep1 = hp_report(cpa, flavor, 1, 0, name)
            ok &= rep0.matches_prediction and rep1.matches_prediction
            ok &= rep0.all_stable and rep1.all_stable
            totals[flavor] = (rep0.total_computed, rep1.total_computed)
        ok &= len(set(totals.values())) == 1
        details.append(f"{name}:{totals['twisted'][0]}")
        if full_route_allowed(cpa):
            agree, _, _ = verify_pi_star(cpa, 0, 1, name)
            ok &= agree
    elapsed = time.time() - t0
    report(3, "HP dims = orbit predictions, stable, routes agree (pi*)",
           ok and elapsed < 300, f"{'; '.join(details)}; {elapsed:.0f}s < 300s")


def test_criterion_04_chi_mu():
    ok = True
    for name in DEFAULT_SCENARIOS:
        cpa = SCENARIOS[name]()
        checks = cyclic_suite(cpa, seed=13, samples=60, max_degree=3)
        wanted = [c for c in checks if c.name in (
            "mu o chi = id, chi o mu = id (mod N^G)",
            "chi intertwines (b_phi, B_phi) with (b, B)")]
        ok &= all(c.passed for c in wanted) and len(wanted) == 2
    report(4, "chi/mu inverse pair + mixed-complex intertwining, all classes", ok)


def test_criterion_05_tau_cocycle():
    ok = (tau_coefficient(0) == Scalar(F(1, 2))
          and tau_coefficient(1) == Scalar(F(-1, 4))
          and tau_coefficient(2) == Scalar(F(1, 24)))
    for name in ("micro", "micro-untwisted", "asym", "scalar"):
        triple = TRIPLES[name]()
        q_hi = 3 if triple.algebra.dim ** 8 <= 70000 else 2
        for q in range(0, q_hi + 1):
            tau = triple.tau(q)
            ok &= co_b(tau).is_zero()
            ok &= co_T(tau) == tau
        ok &= cochain_is_normalized(triple.tau(1))
    report(5, "b tau = 0, T tau = tau, normalization; c_q literal", ok)


def test_criterion_06_transgression():
    ok = True
    for name in ("micro", "micro-untwisted", "asym", "scalar"):
        triple = TRIPLES[name]()
        taus = {q: triple.tau(q) for q in (0, 1, 2)}
        for q in (0, 1):
            phi, psi = triple.transgression(q)
            diff = phi - psi
            ok &= (co_b(diff) - taus[q + 1]).is_zero()
            ok &= (connes_B(diff) + taus[q]).is_zero()
    report(6, "tau_{2q+2} = b(phi-psi), tau_2q = -B(phi-psi), q in {0,1}", ok)


def test_criterion_07_conformal_and_unitary():
    triple, _ = micro_triple()
    cpa = triple.algebra
    k_root = cpa.function_element([2, 3])
    deformed, k, k_inv = conformal_deform(triple, k_root)
    ok = all(deformed.tau(q) == conjugated_cochain(triple.tau(q), k, k_inv)
             for q in (0, 1))
    c, s = Scalar(F(3, 5)), Scalar(F(4, 5))
    z, o = Scalar(0), Scalar(1)
    U = [[c, -s, z, z], [s, c, z, z], [z, z, c, -s], [z, z, s, c]]
    conj = unitary_conjugate(triple, U)
    ok &= all(conj.tau(q) == triple.tau(q) for q in (0, 1, 2))
    report(7, "conformal transport + unitary invariance exact", ok)


def test_criterion_08_index_pairing():
    triple = asym_triple()
    e = [[triple.algebra.delta_u(0, 0)]]
    resid1, p1, ind1 = verify_index_pairing(triple, e, 1)
    ok = (not resid1) and ind1.value == 1 and p1 == Scalar(1)
    ok &= tau_bar_chern_pairing(triple, 2, e) == p1  # q-stability
    one = [[triple.algebra.one()]]
    resid0, p0, ind0 = verify_index_pairing(triple, one, 1)
    ok &= (not resid0) and ind0.value == 0 and not p0
    report(8, "<tau_bar, Ch(e)> = (ind+ - ind-)/2: asym = 1, e = 1 -> 0, q-stable", ok)


def test_criterion_09_transverse_fundamental_class():
    t0 = time.time()
    scn = t2_scenario(quad_n=256)
    ident = scn.identity()
    names = scn.axis_names
    args = [(parse_form("sin(x)*sin(y)", names), ident),
            (parse_form("cos(x)", names), ident),
            (parse_form("cos(y)", names), ident)]
    val = __import__("cyclochern.geometry", fromlist=["cm_cocycle_eval"]) \
        .cm_cocycle_eval(scn, 1, args)
    err = abs(val - (-1j * math.pi / 4))
    elapsed = time.time() - t0
    report(9, "T2 transverse class = -i pi/4 at N = 256",
           err < 1e-6 and elapsed < 30, f"err={err:.2e}, {elapsed:.1f}s < 30s")


def test_criterion_10_sphere_cancellation():
    from cyclochern.geometry import fixed_point_cancellation

    ok = True
    worst = 0.0
    for frac in (F(1, 6), F(1, 4), F(1, 3), F(1, 2)):
        scn = s2_rotation_scenario(frac)
        resid = abs(fixed_point_cancellation(scn, Isometry((F(0), frac))))
        worst = max(worst, resid)
        ok &= resid < 1e-10
    report(10, "S2 rotation pole-sum cancellation (theta = pi/3, pi/2, 2pi/3, pi)",
           ok, f"worst |sum| = {worst:.2e} < 1e-10")


def test_criterion_11_conformal_invariant_two_routes():
    from cyclochern.geometry import conformal_invariant, conformal_invariant_direct

    scn = t2_scenario(quad_n=64)
    omega = parse_form("dx^dy", scn.axis_names)
    direct, paired, resid = conformal_invariant(scn, scn.identity(), 2, omega)
    expect = -2j * math.pi
    ok = abs(direct - expect) < 1e-4 and abs(paired - expect) < 1e-4 and resid < 1e-4
    d2 = conformal_invariant_direct(scn, scn.identity(), 2, omega, quad_n=128,
                                    check=False)
    rel = abs(d2 - direct) / abs(direct)
    ok &= rel < 1e-6
    report(11, "two-route conformal invariant = -2 pi i; doubling stable",
           ok, f"residual={resid:.2e}, doubling rel={rel:.2e}")


def test_criterion_12_determinism(tmp_path):
    from cyclochern.cli import main

    texts = []
    for threads in ("1", "2", "8"):
        out = tmp_path / f"det{threads}.json"
        code = main(["verify", "--suite", "crossed",
                     "--scenario", str(REPO / "data" / "scenarios" / "z2swap.json"),
                     "--seed", "7", "--threads", threads, "--out", str(out)])
        assert code == 0
        texts.append(out.read_text())
    ok = texts[0] == texts[1] == texts[2]
    report(12, "byte-identical reports across 1, 2, 8 threads (fixed seed)", ok)
