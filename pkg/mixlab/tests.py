from __future__ import print_function, division
import json
import os
import tempfile
import numpy
import pytest
from mixlab.blocks import (
    canonical_interleave_block, baker_block, deep_block, identity_block, swirl_block, apply_block,
    block_cost, velocity_cost, velocity_sup_norm
    )
from mixlab.budgets import (
    proof_constants, minimal_cost_check, transport_cost, enstrophy_schedule,
    palenstrophy_schedule, decay_fit
    )
from mixlab.cli import main as cli_main
from mixlab.composer import (
    CellularFlow, Schedule, SigmaSequence, compose_stage, run_flow, global_velocity,
    advect_semi_lagrangian
    )
from mixlab.diagnostics import (
    MixParams, geometric_mixing_scale, geometric_mixing_scale_bruteforce,
    functional_mixing_scale, characteristic_length_scale, unmixedness_certificate,
    sobolev_norm, lusin_lipschitz_profile
    )
from mixlab.grid_field import (
    GridSpec, TracerField, Tiling, init_pattern, constant_field, tile_sums, tile_averages,
    tile_average, mixed_level, refine, lift, indicator, disk_indicator, save_field, load_field
    )
from mixlab.helpers import ManifestError, MissingVelocityError, ResolutionError
from mixlab.manifest import RunManifest
from mixlab.suites import hybrid_block, run_suite
from mixlab.velocity import Swirl, ZeroVelocity, rk4_trajectories


def test_patterns():
    field = init_pattern(GridSpec(1), "left_right_halves")
    numpy.testing.assert_equal(field.values.ravel(), [1, 1, -1, -1])
    board = init_pattern(GridSpec(5), "checkerboard", level=3)
    numpy.testing.assert_equal(numpy.abs(tile_averages(board, 3)), 1)
    numpy.testing.assert_equal(tile_averages(board, 2), 0)
    assert mixed_level(board) == 2
    assert mixed_level(refine(board, 7)) == 2
    stripes = init_pattern(GridSpec(4), "stripes", level=2)
    numpy.testing.assert_equal(stripes.values[:, 0], [1] * 4 + [-1] * 4 + [1] * 4 + [-1] * 4)
    rand = init_pattern(GridSpec(4), "random", seed=3)
    assert numpy.sum(rand.values) == 0
    numpy.testing.assert_equal(rand.values, init_pattern(GridSpec(4), "random", seed=3).values)
    halves = init_pattern(GridSpec(3), "left_right_halves")
    assert tile_average(halves, Tiling(1), (0, 1)) == 1
    assert tile_average(halves, Tiling(1), (1, 0)) == -1
    assert tile_average(halves, Tiling(0), (0, 0)) == 0

    with pytest.raises(ValueError):
        init_pattern(GridSpec(4), "spiral")
    with pytest.raises(ResolutionError):
        init_pattern(GridSpec(3), "checkerboard", level=4)
    with pytest.raises(ValueError):
        TracerField(GridSpec(1), [[1, 1], [1, -1]])
    with pytest.raises(ValueError):
        TracerField(GridSpec(1), [[1, 0], [1, -1]])
    with pytest.raises(ValueError):
        GridSpec(0)
    with pytest.raises(ResolutionError):
        tile_average(halves, Tiling(4), (0, 0))


def test_interleave_block():
    field = init_pattern(GridSpec(2), "left_right_halves")
    mixed = apply_block(canonical_interleave_block(), field)
    for iy in range(4):
        numpy.testing.assert_equal(mixed.values[:, iy], [1, -1, 1, -1])
    assert mixed_level(mixed) == 1


def test_deep_blocks():
    field = apply_block(deep_block(2), init_pattern(GridSpec(3), "left_right_halves"))
    assert mixed_level(field) == 2

    field = apply_block(deep_block(3), init_pattern(GridSpec(4), "left_right_halves"))
    assert mixed_level(field) == 3
    assert numpy.sum(field.values == 1) == 128
    numpy.testing.assert_equal(field.values[:, 5], [1, -1] * 8)

    with pytest.raises(ResolutionError):
        deep_block(3).permutation(3)


def test_baker_block():
    field = apply_block(baker_block(), init_pattern(GridSpec(3), "top_bottom_halves"))
    for iy in range(8):
        expected = -1 if (iy // 2) % 2 == 0 else 1
        numpy.testing.assert_equal(field.values[:, iy], expected)

    rand = init_pattern(GridSpec(6), "random", seed=1)
    moved = apply_block(baker_block(), rand)
    numpy.testing.assert_equal(numpy.sort(moved.values.ravel()), numpy.sort(rand.values.ravel()))
    numpy.testing.assert_equal(numpy.sort(baker_block().permutation(5)), numpy.arange(4 ** 5))


def test_swirl_velocity():
    swirl = Swirl()
    u1, u2 = swirl(0.0, 0.0, 0.0)
    numpy.testing.assert_almost_equal([u1, u2], [0, 0])
    X, Y = GridSpec(6).mesh()
    assert numpy.max(numpy.abs(swirl.divergence(0.0, X, Y))) < 1e-12
    u1, u2 = swirl(0.0, numpy.array([0.7, -0.6, 0.5]), numpy.array([0.1, 0.0, 0.2]))
    numpy.testing.assert_equal(u1, 0)
    numpy.testing.assert_equal(u2, 0)

    # int |grad u|^2 = int |laplace psi|^2 = 2 pi^4 A^2 for this stream function
    numpy.testing.assert_almost_equal(
        velocity_cost(swirl, 1, 2), numpy.sqrt(2) * numpy.pi ** 2 * swirl.amplitude, decimal=6)

    x, y = rk4_trajectories(ZeroVelocity(), [0.1, -0.2], [0.3, 0.0], 0.0, 1.0, 8)
    numpy.testing.assert_equal(x, [0.1, -0.2])
    numpy.testing.assert_equal(y, [0.3, 0.0])


def test_block_costs():
    assert block_cost(identity_block()) == 0
    assert block_cost(hybrid_block()) > 0
    with pytest.raises(MissingVelocityError):
        block_cost(baker_block())
    with pytest.raises(MissingVelocityError):
        block_cost(canonical_interleave_block())
    # grad u vanishes on the boundary: Dirichlet Poincare with first eigenvalue 2 pi^2
    block = hybrid_block()
    assert block_cost(block, 2, 2) >= numpy.sqrt(2) * numpy.pi * block_cost(block, 1, 2)
    with pytest.raises(ValueError):
        block_cost(hybrid_block(), s=0.5)


def test_cellular_flow():
    field = init_pattern(GridSpec(5), "left_right_halves")
    flow = CellularFlow(field, 1, [canonical_interleave_block()] * 3)
    snapshots = run_flow(flow, measure=())
    assert [s.measurements["mixed_level"] for s in snapshots] == [0, 1, 2, 3]
    assert [s.measurements["predicted_level"] for s in snapshots[1:]] == [1, 2, 3]
    numpy.testing.assert_equal(numpy.sort(flow.state.values.ravel()),
                               numpy.sort(field.values.ravel()))

    flow = CellularFlow(init_pattern(GridSpec(6), "random", seed=2), 1,
                        [canonical_interleave_block()] * 2)
    before = tile_sums(flow.state, 1)
    compose_stage(flow, 0)
    compose_stage(flow, 1)
    numpy.testing.assert_equal(tile_sums(flow.state, 1), before)
    with pytest.raises(ValueError):
        compose_stage(flow, 2)

    with pytest.raises(ResolutionError):
        CellularFlow(init_pattern(GridSpec(2), "left_right_halves"), 1,
                     [canonical_interleave_block()] * 2)


def test_sigma_sequence():
    field = init_pattern(GridSpec(5), "left_right_halves")
    flow = CellularFlow(field, 1, [deep_block(2)] * 2)
    assert flow.sigma == [0, 1, 2]
    snapshots = run_flow(flow, measure=())
    assert snapshots[1].measurements["mixed_level"] == 2
    assert snapshots[2].measurements["mixed_level"] == 4
    assert snapshots[2].measurements["predicted_level"] == 4

    with pytest.raises(ValueError):
        CellularFlow(field, 1, [deep_block(2)] * 2, sigma=SigmaSequence.constant(0))
    assert SigmaSequence.linear(1).resolve([1, 1]) == [0, 1, 2]
    with pytest.raises(ValueError):
        SigmaSequence([0, 1]).resolve([1, 1])


def test_global_velocity():
    field = init_pattern(GridSpec(6), "left_right_halves")
    flow = CellularFlow(field, 1, [hybrid_block()] * 2, Schedule([0, 2, 3]))
    swirl = Swirl()
    u = global_velocity(flow, 1.0, 0.1, 0.2)
    numpy.testing.assert_almost_equal(u, numpy.array(swirl(0.5, 0.1, 0.2)) / 2)
    u = global_velocity(flow, 2.5, 0.1, 0.2)
    numpy.testing.assert_almost_equal(u, 0.5 * numpy.array(swirl(0.5, -0.3, -0.1)))
    numpy.testing.assert_equal(global_velocity(flow, 1.0, 0.7, 0.0), [0, 0])
    with pytest.raises(ValueError):
        global_velocity(flow, 3.5, 0.0, 0.0)

    with pytest.raises(MissingVelocityError):
        CellularFlow(field, 1, [baker_block()]).stage_velocity(0)


def test_semi_lagrangian_round_trip():
    grid = GridSpec(9)
    X, Y = grid.mesh()
    field = TracerField(grid, numpy.sin(2 * numpy.pi * X) * numpy.cos(numpy.pi * Y), "continuous")
    flow = CellularFlow(field, 1, [swirl_block()])
    there = advect_semi_lagrangian(flow, 0, substeps=64)
    back = advect_semi_lagrangian(flow, 0, substeps=64, field=there, reverse=True)
    def l2(values):
        return numpy.sqrt(numpy.mean(values ** 2))

    assert l2(back.values - field.values) < 1e-3
    assert 0.99 * l2(field.values) <= l2(there.values) <= 1.01 * l2(field.values)
    numpy.testing.assert_almost_equal(numpy.mean(there.values), 0, decimal=10)

    still = advect_semi_lagrangian(CellularFlow(field, 1, [identity_block()]), 0)
    numpy.testing.assert_almost_equal(still.values, field.values)

    with pytest.raises(ValueError):
        advect_semi_lagrangian(CellularFlow(init_pattern(grid, "left_right_halves"), 1,
                                            [hybrid_block()]), 0)


def test_geometric_mixing_scale():
    params = MixParams()
    halves = geometric_mixing_scale(init_pattern(GridSpec(6), "left_right_halves"), params)
    assert halves.value > 0.25
    assert halves.lower >= 0.25
    assert halves.lower < halves.upper == halves.value

    fine = geometric_mixing_scale(init_pattern(GridSpec(6), "checkerboard", level=4), params)
    coarse = geometric_mixing_scale(init_pattern(GridSpec(6), "checkerboard", level=2), params)
    assert fine.value < coarse.value < halves.value

    for field in (init_pattern(GridSpec(5), "random", seed=0),
                  init_pattern(GridSpec(5), "left_right_halves")):
        assert geometric_mixing_scale(field) == geometric_mixing_scale_bruteforce(field)

    with pytest.raises(ValueError):
        geometric_mixing_scale(constant_field(GridSpec(3), 0.0))
    with pytest.raises(ValueError):
        MixParams(kappa=1.5)


def test_functional_mixing_scale():
    grid = GridSpec(6)
    halves = functional_mixing_scale(init_pattern(grid, "left_right_halves"))
    board = functional_mixing_scale(init_pattern(grid, "checkerboard", level=4))
    assert 0 < board < halves
    numpy.testing.assert_almost_equal(functional_mixing_scale(constant_field(grid, 0.0)), 0)
    wide = functional_mixing_scale(init_pattern(grid, "left_right_halves"), padding=4)
    assert abs(halves - wide) / wide < 0.05
    with pytest.raises(ValueError):
        functional_mixing_scale(init_pattern(grid, "left_right_halves"), padding=1)


def test_characteristic_length_scale():
    n = 2 ** 6
    assert characteristic_length_scale(numpy.ones((n, n), dtype=numpy.int8)) == 0.5
    assert characteristic_length_scale(numpy.zeros((n, n), dtype=numpy.int8)) == 0

    plus = indicator(init_pattern(GridSpec(6), "left_right_halves"), 1)
    ls = characteristic_length_scale(plus)
    assert 0.25 <= ls < 0.3
    assert characteristic_length_scale(plus, (1, (0, 0))) == 0.25
    assert characteristic_length_scale(plus, (1, (1, 0))) == 0
    disk = characteristic_length_scale(disk_indicator(GridSpec(7), 1 / 8))
    assert 0.75 / 8 <= disk <= 1 / 8 + 2 / 128
    with pytest.raises(ValueError):
        characteristic_length_scale(2 * plus)


def test_unmixedness_certificate():
    cert = unmixedness_certificate(init_pattern(GridSpec(6), "left_right_halves"), 0)
    assert cert["certified"]
    assert 0.25 <= cert["measured_alpha"] < 0.3

    cert = unmixedness_certificate(init_pattern(GridSpec(5), "checkerboard", level=5), 0)
    assert not cert["certified"]
    assert cert["measured_alpha"] == 0

    with pytest.raises(ValueError):
        unmixedness_certificate(lift(init_pattern(GridSpec(4), "left_right_halves")), 0)


def test_sobolev_norm():
    X, Y = GridSpec(6).mesh()
    shear = numpy.array([Y, numpy.zeros_like(Y)])
    numpy.testing.assert_almost_equal(sobolev_norm(shear, 1, 2), 1)
    numpy.testing.assert_almost_equal(sobolev_norm(shear, 2, 2), 0)
    numpy.testing.assert_almost_equal(sobolev_norm(shear, 1, numpy.inf), 1)
    assert sobolev_norm(numpy.zeros((2, 64, 64)), 1, 2) == 0
    with pytest.raises(ValueError):
        sobolev_norm(shear, 1.5, 3)
    with pytest.raises(ResolutionError):
        sobolev_norm(shear, 1, 2, tile_level=4)

    # cos(pi x') cos(pi y') with x' = x + 1/2 extends evenly to a single Fourier mode
    mode = numpy.cos(numpy.pi * (X + 0.5)) * numpy.cos(numpy.pi * (Y + 0.5))
    for s, decimal in ((1, 4), (1.5, 8), (2.5, 8)):
        expected = (2 * numpy.pi ** 2) ** (s / 2) / 2
        numpy.testing.assert_almost_equal(sobolev_norm(mode, s, 2) / expected, 1, decimal=decimal)
    with pytest.raises(ValueError):
        sobolev_norm(mode, 1.5, 2, tile_level=1)


def test_lusin_profile():
    m = 4
    n = 2 ** m
    identity = numpy.arange(4 ** m)
    profile = lusin_lipschitz_profile(identity, 0.0, 2)
    numpy.testing.assert_almost_equal(profile.lipschitz, 1)
    numpy.testing.assert_almost_equal(profile.bound, 1)

    ix, iy = numpy.meshgrid(numpy.arange(n), numpy.arange(n), indexing="ij")
    rotation = (iy * n + (n - 1 - ix)).ravel()
    numpy.testing.assert_almost_equal(lusin_lipschitz_profile(rotation, 0.0, 2).lipschitz, 1)

    profile = lusin_lipschitz_profile(baker_block().permutation(m), 1.0, 2)
    assert all(b <= a for a, b in zip(profile.lipschitz, profile.lipschitz[1:]))
    assert profile.lipschitz[0] > 1

    with pytest.raises(ValueError):
        lusin_lipschitz_profile(numpy.zeros(16, dtype=int), 0.0, 2)


def test_lusin_profile_growth():
    field = init_pattern(GridSpec(6), "left_right_halves")
    flow = CellularFlow(field, 1, [canonical_interleave_block()] * 3)
    profiles = []
    for n in range(3):
        compose_stage(flow, n)
        profiles.append(lusin_lipschitz_profile(flow.cumulative, 1.0, 2).lipschitz)
    for profile in profiles:
        assert all(b <= a for a, b in zip(profile, profile[1:]))
    for before, after in zip(profiles, profiles[1:]):
        assert all(b >= a for a, b in zip(before, after))
    assert profiles[0][-1] < profiles[1][-1] < profiles[2][-1]


def test_transport_cost():
    field = init_pattern(GridSpec(6), "left_right_halves")
    flow = CellularFlow(field, 1, [hybrid_block()] * 2)
    whole = transport_cost(flow, 0, 2)
    numpy.testing.assert_almost_equal(whole, transport_cost(flow, 0, 1) + transport_cost(flow, 1, 1),
                                      decimal=6)
    numpy.testing.assert_almost_equal(transport_cost(flow, 0, 1), block_cost(hybrid_block()),
                                      decimal=6)
    with pytest.raises(ValueError):
        transport_cost(flow, 1, 2)
    with pytest.raises(MissingVelocityError):
        transport_cost(CellularFlow(field, 1, [baker_block()]), 0, 1)


def test_schedules():
    block = hybrid_block()
    N = velocity_sup_norm(block.velocity, 1, 2)
    numpy.testing.assert_equal(enstrophy_schedule([block] * 3, N).times, [0, 1, 2, 3])
    numpy.testing.assert_equal(enstrophy_schedule([block] * 3, 2 * N).times, [0, 0.5, 1, 1.5])

    N2 = velocity_sup_norm(block.velocity, 2, 2)
    schedule = palenstrophy_schedule([block] * 5, N2, s=2)
    numpy.testing.assert_equal(schedule.times, [2 ** n - 1 for n in range(6)])

    with pytest.raises(ValueError):
        palenstrophy_schedule([block], N2, s=1)
    with pytest.raises(ValueError):
        enstrophy_schedule([block], 0)
    with pytest.raises(ValueError):
        Schedule([0, 1, 1])


def test_decay_fit():
    t = numpy.arange(8.0)
    fits = decay_fit(zip(t, numpy.exp(-t)))
    assert fits["verdict"] == "exponential"
    numpy.testing.assert_almost_equal(fits["exponential"].rate_or_exponent, 1)
    numpy.testing.assert_almost_equal(fits["exponential"].r_squared, 1)
    assert fits["exponential"].n_samples == 4

    t = numpy.arange(1.0, 9.0)
    fits = decay_fit(zip(t, 1 / t))
    assert fits["verdict"] == "polynomial"
    numpy.testing.assert_almost_equal(fits["polynomial"].rate_or_exponent, -1)
    assert fits["r2_advantage"] > 0
    assert fits["slower_than_exponential"]

    with pytest.raises(ValueError):
        decay_fit([(1, 1), (2, 0.5), (3, 0.25)])
    with pytest.raises(ValueError):
        decay_fit([(1, 1), (2, 0.5), (3, 0.25), (4, -1)])


def test_proof_constants():
    c = proof_constants(MixParams(gamma_bar=0.5, alpha=0.25))
    numpy.testing.assert_almost_equal(c["eta"], 0.5 * 3 / 16 * 0.0625 * numpy.pi)
    numpy.testing.assert_almost_equal(c["omega"], numpy.sqrt(0.75))
    numpy.testing.assert_almost_equal(c["C_gamma"], 1 - numpy.sqrt(7 / 8))


def test_minimal_cost_check():
    report = minimal_cost_check(0, 2, 1.0, 0.5, 0.125, [0, 0, 0], c1=1.0)
    numpy.testing.assert_almost_equal(report.M_nk, 2 * numpy.log(2))
    numpy.testing.assert_almost_equal(report.mix_bound, numpy.log(4))
    assert report.violates_M and report.violates_mix_bound
    report = minimal_cost_check(0, 2, 2.0, 0.5, 0.125, [0, 0, 0], c1=1.0)
    assert not report.violates_M and not report.violates_mix_bound
    report = minimal_cost_check(0, 1, 1.0, 0.5, 0.25, [0, 1], c1=1.0)
    numpy.testing.assert_almost_equal(report.M_nk, 2 * numpy.log(2))

    with pytest.raises(ValueError):
        minimal_cost_check(0, 1, 1.0, 0.0, 0.25, [0, 0])
    with pytest.raises(ValueError):
        minimal_cost_check(0, 2, 1.0, 0.5, 0.25, [0, 0])


def test_field_files(tmp_path):
    rand = init_pattern(GridSpec(3), "random", seed=4)
    path = str(tmp_path / "field.txt")
    save_field(rand, path, comments=["manifest abc"])
    loaded = load_field(path)
    assert loaded.binary
    numpy.testing.assert_equal(loaded.values, rand.values)

    X, Y = GridSpec(3).mesh()
    smooth = TracerField(GridSpec(3), numpy.sin(2 * numpy.pi * X), "continuous")
    save_field(smooth, path)
    numpy.testing.assert_equal(load_field(path).values, smooth.values)

    with open(path, "w") as f:
        f.write("something else\n")
    with pytest.raises(ValueError):
        load_field(path)


def test_manifest():
    manifest = RunManifest({"schema": 1, "m": 4, "stages": 2})
    assert [b.label for b in manifest.blocks()] == ["interleave", "interleave"]
    assert manifest.hash == RunManifest({"schema": 1, "stages": 2, "m": 4}).hash
    assert manifest["padding"] == 2

    bad = [
        {"schema": 2, "m": 4, "stages": 2},
        {"schema": 1, "m": 4},
        {"schema": 1, "m": 4, "stages": 2, "colour": "red"},
        {"schema": 1, "m": 4, "stages": 2, "blocks": {"kind": "vortex"}},
        {"schema": 1, "m": 4, "stages": 2, "pattern": "spiral"},
        {"schema": 1, "m": 4, "stages": 2, "budget": {"kind": "enstrophy", "B": -1}},
        {"schema": 1, "m": 4, "stages": 2, "budget": {"kind": "explicit", "times": [0, 1]}},
        {"schema": 1, "m": 4, "stages": 2, "params": {"kappa": 2}},
        {"schema": 1, "m": 4, "stages": 2, "sigma": {"kind": "quadratic"}},
        ]
    for data in bad:
        with pytest.raises(ManifestError):
            RunManifest(data)


def _write_manifest(directory, data):
    path = os.path.join(str(directory), "manifest.json")
    with open(path, "w") as f:
        json.dump(data, f)
    return path


def test_cli_run(tmp_path):
    out = str(tmp_path / "out")
    path = _write_manifest(tmp_path, {"schema": 1, "m": 5, "stages": 3, "output": out})
    assert cli_main(["run", path]) == 0
    assert sorted(os.listdir(os.path.join(out, "snapshots"))) == [
        "field_0.txt", "field_1.txt", "field_2.txt", "field_3.txt"]
    with open(os.path.join(out, "measurements.csv")) as f:
        assert f.readline().startswith("# manifest ")
        assert f.readline().startswith("n,t,G")
    assert os.path.exists(os.path.join(out, "decay_fit.json"))
    assert mixed_level(load_field(os.path.join(out, "snapshots", "field_3.txt"))) == 3


def test_cli_exit_codes(tmp_path):
    path = _write_manifest(tmp_path, {"schema": 7, "m": 4, "stages": 2})
    assert cli_main(["run", path]) == 2
    assert cli_main(["run", str(tmp_path / "missing.json")]) == 2

    path = _write_manifest(tmp_path, {"schema": 1, "m": 2, "stages": 2})
    assert cli_main(["run", path]) == 3

    path = _write_manifest(tmp_path, {
        "schema": 1, "m": 4, "stages": 2, "blocks": {"kind": "baker"},
        "diagnostics": {"costs": True}, "output": str(tmp_path / "baker"),
        })
    assert cli_main(["run", path]) == 4
    assert not os.path.exists(str(tmp_path / "baker"))

    path = _write_manifest(tmp_path, {
        "schema": 1, "m": 4, "stages": 3,
        "blocks": {"kind": "interleave", "velocity": {"kind": "swirl"}},
        "diagnostics": {"sobolev": True}, "output": str(tmp_path / "coarse"),
        })
    assert cli_main(["run", path]) == 3
    assert not os.path.exists(str(tmp_path / "coarse"))

    assert cli_main(["schedule", "--budget", "1", "--stages", "2", "--s", "2",
                     "--out", str(tmp_path / "sched")]) == 0
    with open(str(tmp_path / "sched" / "schedule.csv")) as f:
        assert f.readline().startswith("# manifest ")
    field_path = str(tmp_path / "baked.txt")
    save_field(apply_block(baker_block(), init_pattern(GridSpec(4), "top_bottom_halves")), field_path)
    assert cli_main(["measure", "--field", field_path, "--out", str(tmp_path / "meas")]) == 0
    assert os.path.exists(str(tmp_path / "meas" / "measurements.csv"))
    assert cli_main(["measure", "--field", field_path, "--kappa", "3"]) == 2

    with pytest.raises(ValueError):
        run_suite("everything")


def test_verify_suites():
    for name in ("conservation", "oracle"):
        report = run_suite(name)
        assert report["passed"], report["checks"]
    assert cli_main(["verify", "lemma25"]) == 0


def main():
    print("Starting tests for mixlab...")
    test_patterns()
    test_interleave_block()
    test_deep_blocks()
    test_baker_block()
    print("Patterns and blocks correct.")
    test_swirl_velocity()
    test_block_costs()
    test_cellular_flow()
    test_sigma_sequence()
    test_global_velocity()
    test_semi_lagrangian_round_trip()
    print("Cellular flows correct.")
    test_geometric_mixing_scale()
    test_functional_mixing_scale()
    test_characteristic_length_scale()
    test_unmixedness_certificate()
    test_sobolev_norm()
    test_lusin_profile()
    test_lusin_profile_growth()
    print("Diagnostics correct.")
    test_transport_cost()
    test_schedules()
    test_decay_fit()
    test_proof_constants()
    test_minimal_cost_check()
    print("Budgets correct.")
    from pathlib import Path
    for test in (test_field_files, test_cli_run, test_cli_exit_codes):
        test(Path(tempfile.mkdtemp()))
    test_manifest()
    test_verify_suites()
    print("All tests completed.")


if __name__ == "__main__":
    main()
