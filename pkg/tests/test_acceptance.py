"""Acceptance criteria 1 to 12.

Each test is one criterion.  Runtimes are measured inside the test and
compared with the pinned limit; ``conftest.py`` prints one pass/fail line
per criterion at the end of the run.
"""

from __future__ import annotations

import json
import random
import time
from importlib import resources
from itertools import combinations_with_replacement, product

import pytest

from confsym.ckt import conformal_killing_residual, expected_dimension, solve_conformal_killing
from confsym.cli.runner import emit_report, pairing_weight_grid, run_tasks
from confsym.cli.taskfile import format_taskfile, parse_taskfile
from confsym.conformal import (
    connection_change_residual,
    curvature_transform_residual,
    factorization_identity_residual,
    invariance_check,
    pairing_first,
    pairing_oneform,
    pairing_second,
    random_background,
    special_weight_operators,
    yamabe_apply,
    yamabe_ckt_experiment,
)
from confsym.conformal.invariance import random_density, random_jet, random_stf, random_vector
from confsym.conformal.pairings import (
    first_example,
    oneform_pairing_coefficients,
    pairing_first_coefficients,
    pairing_second_coefficients,
    second_example,
    special_weights,
    yamabe_coefficient,
)
from confsym.exact.scalar import Q
from confsym.fields import WeightedTensorField
from confsym.symmetry import (
    NotFound,
    bracket_identity_residual,
    build_delta,
    build_first_order,
    build_second_order,
    check_intertwine,
    composition_identity_residual,
    eleven_generators_r3,
    find_delta,
)
from confsym.weyl import laplacian

pytestmark = pytest.mark.slow

SEEDS5 = (0, 1, 2, 3, 4)
SEEDS3 = (0, 1, 2)
ORDER = 6

# seconds, pinned from the acceptance criteria
LIMITS = {1: 1, 2: 10, 3: 60, 4: 60, 5: 10, 6: 30, 7: 120, 8: 180, 9: 60, 10: 120, 11: 30, 12: 5}


@pytest.fixture
def clock(record_property):
    """Tag the test with its criterion and enforce the time limit on teardown."""
    state = {}

    def start(criterion):
        record_property("criterion", criterion)
        record_property("limit", LIMITS[criterion])
        state["k"] = criterion
        state["t0"] = time.perf_counter()

    yield start
    elapsed = time.perf_counter() - state["t0"]
    limit = LIMITS[state["k"]]
    assert elapsed < limit, f"criterion {state['k']} took {elapsed:.2f}s, limit {limit}s"


def test_criterion_01_eleven_generators(clock):
    clock(1)
    gens = eleven_generators_r3()
    assert len(gens) == 11
    L = laplacian(3)
    for name, D in gens:
        delta = find_delta(L, D, max(D.order, 0), 2)
        assert check_intertwine(L, D, delta).residual.is_zero(), name


def test_criterion_02_theorem_one_flat(clock):
    clock(2)
    for n in (3, 4, 5):
        L = laplacian(n)
        basis = solve_conformal_killing(n, 1, 2)
        assert len(basis) == expected_dimension(n, 1)
        for V in basis:
            assert check_intertwine(L, build_first_order(V), build_delta(1, V)).verified


def test_criterion_03_dimension_counts(clock):
    clock(3)
    for n, valence, deg, count in ((3, 1, 2, 10), (3, 2, 4, 35), (4, 2, 4, 84), (5, 2, 4, 168)):
        basis = solve_conformal_killing(n, valence, deg)
        assert len(basis) == count == expected_dimension(n, valence)
        assert all(conformal_killing_residual(V, valence).is_zero() for V in basis)
        assert len(solve_conformal_killing(n, valence, deg + 1)) == count


def test_criterion_04_second_order_symmetries(clock):
    clock(4)
    L = laplacian(3)
    basis = solve_conformal_killing(3, 2, 4)
    assert len(basis) == 35
    for V2 in basis:
        D = build_second_order(V2)
        delta = find_delta(L, D, 2, 4)
        assert check_intertwine(L, D, delta).verified
        assert delta == build_delta(2, V2)


def test_criterion_05_bracket_identity(clock):
    clock(5)
    for n in (3, 4):
        basis = solve_conformal_killing(n, 1, 2)
        for V, W in product(basis, repeat=2):
            assert bracket_identity_residual(V, W).is_zero()


def test_criterion_06_composition_identity(clock):
    clock(6)
    basis = solve_conformal_killing(3, 1, 2)
    pairs = list(combinations_with_replacement(basis, 2))
    assert len(pairs) == 55
    for V, W in pairs:
        assert composition_identity_residual(V, W).is_zero()


def _all_zero(jets):
    jets = list(jets)
    return all(j.is_zero() for j in jets) and min(j.order for j in jets) >= 0


def test_criterion_07_transformation_laws(clock):
    clock(7)
    for n, seed in product((3, 4), SEEDS5):
        bg = random_background(n, ORDER, seed)
        rng = random.Random(seed)
        for valence, w in (((), Q(3, 2)), (("d",), Q(-1, 2)), (("u",), 1), (("u", "d"), Q(3, 2))):
            comps = {idx: random_jet(n, ORDER, rng) for idx in product(range(n), repeat=len(valence))}
            T = WeightedTensorField(n, valence, "none", w, comps)
            res = connection_change_residual(T, bg.g, bg.omega, bg.cache)
            assert _all_zero(res.components.values()), (n, seed, valence)
        curv = curvature_transform_residual(bg.g, bg.omega, bg.cache)
        assert _all_zero(curv["riemann_residual"].values()), (n, seed)
        assert _all_zero([curv["scalar_residual"]]), (n, seed)
        f = random_density(bg, rng, Q(2 - n, 2))
        rep = invariance_check(yamabe_apply, bg, [f], Q(-2 - n, 2))
        assert rep.verified, (n, seed)


def test_criterion_08_pairing_grid(clock):
    clock(8)
    n = 3
    vs, ws = pairing_weight_grid(n)
    for seed in SEEDS5:
        bg = random_background(n, ORDER, seed)
        rng = random.Random(seed)
        for v, w in product(vs, ws):
            V = random_vector(bg, rng, v)
            V2 = random_stf(bg, rng, v)
            f = random_density(bg, rng, w)
            assert invariance_check(pairing_first, bg, [V, f], v + w).verified, ("first", v, w, seed)
            assert invariance_check(pairing_second, bg, [V2, f], v + w).verified, ("second", v, w, seed)
        # reductions at v = 0
        V, V2 = random_vector(bg, rng, 0), random_stf(bg, rng, 0)
        for w in ws:
            f = random_density(bg, rng, w)
            assert pairing_first(bg.cache, V, f).comp(()) == first_example(bg.cache, V, f).scale(n)
            assert pairing_second(bg.cache, V2, f).comp(()) == second_example(bg.cache, V2, f).scale((n + 1) * (n + 2))
        # factorization identity
        for v, w in ((0, 2), (Q(1, 2), Q(-3, 2)), (-1, 1)):
            V2 = random_stf(bg, rng, v)
            f = random_density(bg, rng, w, normalized=True)
            assert factorization_identity_residual(bg.cache, V2, f).is_zero(), (v, w, seed)


def test_criterion_09_oneform_and_special(clock):
    clock(9)
    n = 3
    for seed in SEEDS3:
        bg = random_background(n, ORDER, seed)
        rng = random.Random(seed)
        for v, w in ((0, 0), (Q(1, 2), Q(-1, 2)), (-1, 2)):
            V2 = random_stf(bg, rng, v)
            phi = random_vector(bg, rng, w, "d")
            assert invariance_check(pairing_oneform, bg, [V2, phi], v + w).verified, (v, w, seed)
        for variant, (valence, w, lam) in special_weights(n).items():
            if valence == ():
                T = random_density(bg, rng, w)
            elif valence == ("u",):
                T = random_vector(bg, rng, w)
            else:
                T = random_stf(bg, rng, w)
            op = lambda c, X, v=variant: special_weight_operators(c, v, X)  # noqa: E731
            assert invariance_check(op, bg, [T], lam).verified, (variant, seed)


def test_criterion_10_open_question_experiment(clock):
    clock(10)
    n = 3
    basis = solve_conformal_killing(n, 2, 4)
    tensors = [(f"b{i}", V2) for i, V2 in enumerate(basis)]
    flat = yamabe_ckt_experiment(n, tensors, seed=0, order=7, weights=(0, 1), flat=True)
    assert len(flat) == 70
    assert all(r.vanishes for r in flat)
    curved = yamabe_ckt_experiment(n, tensors[::7], seed=1, order=7, weights=(-1, 0, 1))
    assert len(curved) == 15
    for r in curved:
        # an outcome is reported, never asserted
        assert r.status == "experimental" and r.seed == 1 and not r.flat
        assert r.valid_order >= 0


def _bumped(coeffs, k):
    out = list(coeffs)
    out[k] = out[k] + 1
    return tuple(out)


def test_criterion_11_negative_controls(clock):
    clock(11)
    n = 3
    L = laplacian(n)
    bg = random_background(n, ORDER, 7)
    rng = random.Random(7)
    # first-order symmetry: a wrong zeroth-order constant has no partner
    V = solve_conformal_killing(n, 1, 2)[-1]
    with pytest.raises(NotFound):
        find_delta(L, build_first_order(V, Q(-1, 2) + 1), 1, 2)
    # first pairing
    v, w = Q(1, 2), Q(-3, 2)
    Vw, f = random_vector(bg, rng, v), random_density(bg, rng, w)
    base = pairing_first_coefficients(n, v, w)
    for k in range(2):
        fn = lambda c, A, B, cs=_bumped(base, k): pairing_first(c, A, B, cs)  # noqa: E731
        assert not invariance_check(fn, bg, [Vw, f], v + w, constant_check=False).verified, ("first", k)
    # second pairing, every coefficient
    V2 = random_stf(bg, rng, v)
    base = pairing_second_coefficients(n, v, w)
    for k in range(4):
        fn = lambda c, A, B, cs=_bumped(base, k): pairing_second(c, A, B, cs)  # noqa: E731
        assert not invariance_check(fn, bg, [V2, f], v + w, constant_check=False).verified, ("second", k)
    # one-form pairing
    phi = random_vector(bg, rng, w, "d")
    base = oneform_pairing_coefficients(n, v, w)
    for k in range(2):
        fn = lambda c, A, B, cs=_bumped(base, k): pairing_oneform(c, A, B, cs)  # noqa: E731
        assert not invariance_check(fn, bg, [V2, phi], v + w, constant_check=False).verified, ("oneform", k)
    # Yamabe curvature coefficient
    h = random_density(bg, rng, Q(2 - n, 2))
    fn = lambda c, A: yamabe_apply(c, A, yamabe_coefficient(n) + 1)  # noqa: E731
    assert not invariance_check(fn, bg, [h], Q(-2 - n, 2), constant_check=False).verified
    # the bundled negative-control file fails every task
    text = (resources.files("confsym.cli") / "tasks" / "negative_controls.task").read_text()
    report = run_tasks(parse_taskfile(text))
    assert {e.status for e in report.entries} == {"residual_nonzero"}
    assert report.exit_code() == 1


def test_criterion_12_parser_and_report(clock):
    clock(12)
    tasks = resources.files("confsym.cli") / "tasks"
    names = sorted(p.name for p in tasks.iterdir() if p.name.endswith(".task"))
    assert names
    for name in names:
        tf = parse_taskfile((tasks / name).read_text())
        assert parse_taskfile(format_taskfile(tf)) == tf, name
    tf = parse_taskfile((tasks / "transforms.task").read_text())
    a = emit_report(run_tasks(tf), "json", timing=False)
    b = emit_report(run_tasks(tf), "json", timing=False)
    assert a == b
    assert json.loads(a)["version"] == 1
