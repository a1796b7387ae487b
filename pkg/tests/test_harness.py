import numpy as np
import pytest

import schurhorn as sh
from schurhorn.errors import EmptySample, InsufficientGrid, MajorizationViolated, UnknownFamily
from schurhorn.rng import CounterRNG, mix64


def test_rng_streams_are_deterministic():
    a = CounterRNG(42)
    b = CounterRNG(42)
    assert [a.u64() for _ in range(5)] == [b.u64() for _ in range(5)]
    assert CounterRNG(42).uniform() != CounterRNG(43).uniform()


def test_rng_pinned_algorithm_values():
    # splitmix64 finalizer on base + k * golden gamma
    base = mix64(7)
    first = mix64((base + 0x9E3779B97F4A7C15) & ((1 << 64) - 1))
    assert CounterRNG(7).u64() == first


def test_rng_spawn_independent():
    root = CounterRNG(1)
    c1 = root.spawn(0)
    c2 = root.spawn(1)
    assert c1.u64() != c2.u64()
    assert root.spawn(0).u64() == CounterRNG(1).spawn(0).u64()


def test_rng_randint_bounds_and_shuffle():
    rng = CounterRNG(5)
    vals = [rng.randint(7) for _ in range(200)]
    assert min(vals) >= 0 and max(vals) <= 6
    xs = list(range(10))
    rng.shuffle(xs)
    assert sorted(xs) == list(range(10))


def test_gen_instance_deterministic():
    a = sh.gen_instance("diagonal-distinct", 4, 7)
    b = sh.gen_instance("diagonal-distinct", 4, 7)
    assert np.array_equal(a.matrix.upper, b.matrix.upper)
    assert np.array_equal(a.base, b.base)


def test_gen_instance_irreducible_is_connected():
    inst = sh.gen_instance("irreducible", 5, 1)
    comps = sh.connected_components(inst.matrix)
    assert len(comps) == 1


def test_gen_instance_mixed_block_decomposes():
    inst = sh.gen_instance("mixed-block", 6, 2)
    part = sh.block_decompose(inst.matrix)
    assert len(part.blocks) >= 2


def test_gen_instance_unknown_family():
    with pytest.raises(UnknownFamily):
        sh.gen_instance("no-such-family", 4, 0)


def test_sweep_requires_two_grid_points():
    with pytest.raises(InsufficientGrid):
        sh.epsilon_sweep(
            sh.SweepConfig(family="diagonal-distinct", n=4, eps_grid=(1e-3,), seed=0)
        )


def test_sweep_config_validation():
    with pytest.raises(ValueError):
        sh.SweepConfig(family="diagonal-distinct", n=4, eps_grid=(1e-3, 1e-2))
    with pytest.raises(ValueError):
        sh.SweepConfig(family="diagonal-distinct", n=4, trials_per_eps=0)
    with pytest.raises(UnknownFamily):
        sh.SweepConfig(family="bogus", n=4)


def test_sweep_reproducible_csv():
    cfg = sh.SweepConfig(
        family="irreducible", n=4, eps_grid=(1e-2, 1e-4, 1e-6), trials_per_eps=2, seed=3
    )
    csv1 = sh.sweep_to_csv(sh.epsilon_sweep(cfg))
    csv2 = sh.sweep_to_csv(sh.epsilon_sweep(cfg))
    assert csv1 == csv2
    header = csv1.splitlines()[0]
    assert header == "family,n,eps,trial,distance,gnorm1,gnorm2,diag_resid,spec_resid,status"


def test_sweep_median_distance_monotone():
    for fam in ("diagonal-distinct", "irreducible"):
        cfg = sh.SweepConfig(family=fam, n=5, trials_per_eps=3, seed=6, perturbation_style="generic")
        res = sh.epsilon_sweep(cfg)
        meds = [m for _, m in res.medians]
        assert all(a >= b for a, b in zip(meds, meds[1:]))


def test_sweep_slopes_match_regimes():
    cfg = sh.SweepConfig(
        family="diagonal-distinct", n=5, trials_per_eps=3, seed=11, perturbation_style="adversarial"
    )
    res = sh.epsilon_sweep(cfg)
    assert 0.45 <= res.fitted_slope <= 0.55

    cfg = sh.SweepConfig(
        family="irreducible", n=5, trials_per_eps=3, seed=7, perturbation_style="generic"
    )
    res = sh.epsilon_sweep(cfg)
    assert 0.9 <= res.fitted_slope <= 1.1


def test_validation_passes_on_all_sweep_families():
    rng = CounterRNG(31)
    for fam in sh.FAMILIES:
        n = 6 if "mixed" in fam else 4
        inst = sh.gen_instance(fam, n, 13)
        h = inst.direction("generic", rng)
        lam = inst.lam_at(h, 1e-4)
        if fam.startswith("hermitian"):
            cert = sh.schur_horn_correct_hermitian(inst.matrix, lam)
        else:
            cert = sh.schur_horn_correct(inst.matrix, lam)
        assert sh.validate_certificate(inst.matrix, lam, cert).all_ok


def test_validate_detects_corruption_and_mismatch():
    import dataclasses

    from schurhorn.transforms import RotationTransform

    eps = 1e-5
    a = sh.DenseHermitian.from_diag([1.0, 2.0, 3.0])
    lam = [1 - eps, 2.0, 3 + eps]
    cert = sh.schur_horn_correct(a, lam)
    good = sh.validate_certificate(a, lam, cert)
    assert good.all_ok

    bad = dataclasses.replace(cert, transforms=list(cert.transforms))
    g = bad.transforms[0].params
    bad.transforms[0] = RotationTransform(
        dataclasses.replace(g, theta=g.theta + 1e-3), stage=bad.transforms[0].stage
    )
    rep = sh.validate_certificate(a, lam, bad)
    assert not rep.diag_ok

    rep = sh.validate_certificate(a, [1 - 2e-3, 2.0, 3 + 2e-3], cert)
    assert not rep.spectrum_ok


def test_hausdorff_trivial_and_empty():
    lam = np.array([0.5, 1.5, 3.0])
    d = np.array([1.0, 2.0, 2.0])
    assert sh.hausdorff_upper_bound(lam, lam, d, samples=3, seed=0) <= 1e-10
    with pytest.raises(EmptySample):
        sh.hausdorff_upper_bound(lam, lam, d, samples=0)


def test_hausdorff_rejects_inadmissible():
    with pytest.raises(MajorizationViolated):
        sh.hausdorff_upper_bound([1.5, 1.5], [1.0, 2.0], [1.0, 2.0], samples=1)


def test_hausdorff_scales_with_sqrt_eps():
    import math

    d = np.array([1.0, 2.0, 3.0])
    lam = np.array([0.7, 2.0, 3.3])
    for eps in (1e-4, 1e-6):
        lam2 = lam + eps * np.array([-1.0, 0.0, 1.0])
        bound = sh.hausdorff_upper_bound(lam, lam2, d, samples=3, seed=2)
        assert bound <= 4.0 * math.sqrt(np.linalg.norm(lam2 - lam))
