"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also repeated in the terminal summary.
"""
import itertools
import json
import random
import subprocess
import sys
import time
import xml.etree.ElementTree as ET

import pytest

from acceptance_log import criterion
from exact_samples import build, hyper, report, round_trip_base, sphere_pair, unit_hyper
from hopflattice.algebra import (
    HALF,
    ONE,
    SQRT2,
    ZERO,
    ExactScalar,
    Hyper,
    basis_element,
    cd_mul,
    cd_norm2,
    find_zero_divisor,
)
from hopflattice.analysis import assert_kissing, gram_and_basis, spectra_equal
from hopflattice.cli import main
from hopflattice.constructions import cell24_hopf, cell24_standard
from hopflattice.hopf import fiber_point, h1, h2, hopf_direct

SAMPLES = 1000
TARGETS = ["cell24", "e8", "lambda16"]


def test_criterion_1_cell24_identity():
    with criterion("1  24-cell identity, exact, < 1 s"):
        cell24_hopf.cache_clear()
        start = time.perf_counter()
        config = cell24_hopf()
        elapsed = time.perf_counter() - start
        assert set(config.points) == set(cell24_standard().points)
        assert len(config) == 24
        assert elapsed < 1.0, f"build took {elapsed:.2f}s"


@pytest.mark.parametrize("target,pairs,budget", [
    ("cell24", 276, 1.0), ("e8", 28_680, 5.0), ("lambda16", 9_329_040, 300.0)])
def test_criterion_2_kissing_exact(target, pairs, budget):
    config = build(target)
    with criterion(f"2  kissing exact, {target}: max dot 1/2 over {pairs} pairs, < {budget:g} s"):
        start = time.perf_counter()
        ok, witness = assert_kissing(config)
        elapsed = time.perf_counter() - start
        assert ok, f"witness {witness}"
        r = report(target)
        assert r.max_offdiag_dot == HALF
        assert sum(r.dot_spectrum.values()) == pairs
        assert elapsed < budget, f"kissing check took {elapsed:.2f}s"


@pytest.mark.parametrize("target,count,neighbors", [
    ("cell24", 24, 8), ("e8", 240, 56), ("lambda16", 4320, 280)])
def test_criterion_3_counts(target, count, neighbors):
    with criterion(f"3  counts, {target}: {count} points, {neighbors} neighbors each"):
        r = report(target)
        assert r.point_count == count
        assert r.uniform_neighbor_count() == neighbors


@pytest.mark.parametrize("target,own,per,fibers", [
    ("cell24", 0, 2, 4), ("e8", 8, 6, 8), ("lambda16", 56, 14, 16)])
def test_criterion_4_fiber_decomposition(target, own, per, fibers):
    total = own + per * fibers
    with criterion(f"4  fiber decomposition, {target}: {total} = {own} + {per}x{fibers}"):
        r = report(target)
        assert r.uniform_fiber_profile() == (own, [per] * fibers)
        assert total == r.uniform_neighbor_count()
        # the antipodal fiber contributes nothing
        for i in range(r.point_count):
            f = r.fiber_labels[i]
            anti = f.translate(str.maketrans("+-", "-+"))
            assert r.decomposition[i].get(anti, 0) == 0


@pytest.mark.parametrize("target,multiplicities", [
    ("cell24", (8, 6, 8, 1)), ("e8", (56, 126, 56, 1)), ("lambda16", (280, 3758, 280, 1))])
def test_criterion_5_angle_spectrum(target, multiplicities):
    values = (HALF, ZERO, -HALF, -ONE)
    with criterion(f"5  angle spectrum, {target}: dots in {{-1,-1/2,0,1/2}}, "
                   f"per point {dict(zip(map(str, values), multiplicities))}"):
        r = report(target)
        extra = sorted(set(r.dot_spectrum) - set(values))
        assert not extra, f"dots outside the set: {[str(v) for v in extra]}"
        assert r.uniform_point_spectrum() == dict(zip(values, multiplicities))


@pytest.mark.parametrize("target,scale,rank,det", [
    ("e8", SQRT2, 8, 1), ("lambda16", ExactScalar(2), 16, 256)])
def test_criterion_6_lattice_certificates(target, scale, rank, det):
    config = build(target)
    with criterion(f"6  lattice certificate, {target} x {scale}: rank {rank}, even, det {det}, < 60 s"):
        start = time.perf_counter()
        rep = gram_and_basis(config, scale)
        elapsed = time.perf_counter() - start
        assert (rep.rank, rep.even) == (rank, True)
        assert rep.determinant == det, f"determinant {rep.determinant}"
        assert elapsed < 60, f"took {elapsed:.1f}s"


@pytest.mark.parametrize("target", ["e8", "lambda16"])
def test_criterion_7_oracle_equivalence(target, tmp_path, capsys):
    with criterion(f"7  oracle equivalence, {target}: spectra_equal and compare exits 0"):
        assert spectra_equal(build(target), build(target, "canonical"))
        a, b = tmp_path / "hopf.json", tmp_path / "canonical.json"
        assert main(["build", target, "hopf", "-o", str(a)]) == 0
        assert main(["build", target, "canonical", "-o", str(b)]) == 0
        capsys.readouterr()
        code = main(["compare", str(a), str(b)])
        diffs = json.loads(capsys.readouterr().out)["diffs"]
        assert code == 0, f"compare exit {code}: {diffs}"


@pytest.mark.parametrize("level", [1, 2, 3])
def test_criterion_8_hopf_identities(level):
    with criterion(f"8  Hopf identities, level {level}: {SAMPLES} exact samples each"):
        rng = random.Random(800 + level)
        for _ in range(SAMPLES):
            p = sphere_pair(rng, level)
            b = hopf_direct(p)
            assert cd_norm2(b.a) + b.t * b.t == ONE
            assert (cd_norm2(p.w) + cd_norm2(p.z)) ** 2 == ONE
            assert h2(h1(p)) == b
        for _ in range(SAMPLES):
            base = round_trip_base(rng, level)
            assert hopf_direct(fiber_point(base, unit_hyper(rng, level))) == base


def test_criterion_9_algebra():
    with criterion(f"9  algebra: norm multiplicative ({SAMPLES} pairs per level), "
                   "sedenion zero divisor, octonion non-associative but alternative"):
        rng = random.Random(900)
        for level in (1, 2, 3):
            for _ in range(SAMPLES):
                x, y = hyper(rng, level), hyper(rng, level)
                assert cd_norm2(cd_mul(x, y)) == cd_norm2(x) * cd_norm2(y)
        x, y = find_zero_divisor(4)
        assert x and y and cd_mul(x, y) == Hyper.zero(4)
        e = [basis_element(3, k) for k in range(8)]
        assert any(cd_mul(cd_mul(a, b), c) != cd_mul(a, cd_mul(b, c))
                   for a, b, c in itertools.product(e, repeat=3))
        for _ in range(200):
            x, y = hyper(rng, 3), hyper(rng, 3)
            assert cd_mul(x, cd_mul(x, y)) == cd_mul(cd_mul(x, x), y)
            assert cd_mul(cd_mul(y, x), x) == cd_mul(y, cd_mul(x, x))


def _render_subprocess(target, frames, out):
    cmd = [sys.executable, "-m", "hopflattice", "render", target, "--frames", str(frames),
           "-o", str(out)]
    return subprocess.run(cmd, capture_output=True, text=True)


@pytest.mark.parametrize("target,frames,markers,colors", [
    ("cell24", 15, 24, 6), ("e8", 20, 240, 10)])
def test_criterion_10_figures(target, frames, markers, colors, tmp_path):
    with criterion(f"10 figure, {target}: {frames} frames x {markers} markers, {colors} colors, "
                   "byte-deterministic"):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        assert _render_subprocess(target, frames, a).returncode == 0
        assert _render_subprocess(target, frames, b).returncode == 0
        assert a.read_bytes() == b.read_bytes()
        ns = "{http://www.w3.org/2000/svg}"
        root = ET.fromstring(a.read_bytes())
        groups = [g for g in root.iter(f"{ns}g") if g.get("id", "").startswith("frame-")]
        assert len(groups) == frames
        fills = set()
        for g in groups:
            circles = list(g.iter(f"{ns}circle"))
            assert len(circles) == markers
            fills |= {c.get("fill") for c in circles}
        assert len(fills) == colors


def test_criterion_11_e5_experiment(capsys):
    with criterion("11 E5 experiment: --fiber-size 4 completes and reports the exact max dot"):
        assert main(["experiment-e5", "--fiber-size", "4"]) == 0
        data = json.loads(capsys.readouterr().out)
        top = ExactScalar.parse(data["max_offdiag_dot"])
        assert data["point_count"] == 160
        assert abs(float(top) - data["max_offdiag_dot_float"]) < 1e-15
        assert data["kissing"] == (top <= HALF)
        print(f"   e5 lift, 4 phases per fiber: max dot {top} ~ {float(top):.6f}, "
              f"kissing {data['kissing']}")
