"""Signal-space inner products, norms, splits, and the CLMS file format."""

import numpy as np
import pytest

from clifford_mellin.algebra import CL02, CL11, CL20, SIGNATURES, Multivector
from clifford_mellin.errors import DomainError, FormatError, GeometryError
from clifford_mellin.roots import default_pair
from clifford_mellin.signal import (
    GridGeometry,
    LogPolarSignal,
    default_geometry,
    inner_product,
    norm,
    random_signal,
    read_clms,
    scalar_inner_product,
    split_signal,
    write_clms,
)

GEO = default_geometry(32)


def test_geometry_validation():
    with pytest.raises(GeometryError):
        GridGeometry(3, 8, -1.0, 1.0)
    with pytest.raises(GeometryError):
        GridGeometry(8, 8, 1.0, -1.0)
    geo = GridGeometry(8, 16, -2.0, 2.0)
    assert geo.span == 4.0
    assert geo.ds == 0.5
    assert geo.dtheta == pytest.approx(2 * np.pi / 16)
    assert geo.is_symmetric
    assert not GridGeometry(8, 8, 0.0, 1.0).is_symmetric
    assert geo.v_values[geo.n_s // 2] == 0.0
    assert geo.k_values[geo.n_theta // 2] == 0.0


def test_constant_inner_product():
    one = Multivector.scalar(CL02, 1.0)
    sig = LogPolarSignal.constant(GEO, one)
    result = inner_product(sig, sig)
    expected = GEO.span * 2 * np.pi
    assert result.allclose(Multivector.scalar(CL02, expected), tol=1e-10)
    assert norm(sig) == pytest.approx(np.sqrt(expected), rel=1e-12)


def test_inner_product_zero_and_single_sample():
    zero = LogPolarSignal.from_channels(GEO, CL11)
    a = random_signal(GEO, CL11, seed=1)
    assert inner_product(a, zero) == Multivector(CL11, (0, 0, 0, 0))

    arr = np.zeros((GEO.n_s, GEO.n_theta, 4))
    m = Multivector(CL11, (0.3, -1.2, 0.5, 2.0))
    arr[3, 7] = m.coeffs
    single = LogPolarSignal(GEO, CL11, arr)
    got = inner_product(single, single)
    expected = (m * m.principal_reverse()) * (GEO.ds * GEO.dtheta)
    assert got.allclose(expected, tol=1e-14)


@pytest.mark.parametrize("sig", SIGNATURES)
def test_scalar_inner_product_symmetric(sig):
    a = random_signal(GEO, sig, seed=2)
    b = random_signal(GEO, sig, seed=3)
    lhs = scalar_inner_product(a, b)
    rhs = scalar_inner_product(b, a)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_orthogonal_blade_channels():
    rng = np.random.default_rng(4)
    fa = rng.uniform(-1, 1, size=(GEO.n_s, GEO.n_theta))
    fb = rng.uniform(-1, 1, size=(GEO.n_s, GEO.n_theta))
    a = LogPolarSignal.from_channels(GEO, CL20, m1=fa)
    b = LogPolarSignal.from_channels(GEO, CL20, m2=fb)
    assert abs(scalar_inner_product(a, b)) <= 1e-12


def test_self_inner_product_is_norm_squared():
    a = random_signal(GEO, CL02, seed=5)
    assert scalar_inner_product(a, a) == pytest.approx(norm(a) ** 2, rel=1e-12)
    assert inner_product(a, a).scalar_part == pytest.approx(norm(a) ** 2, rel=1e-12)


def test_norm_homogeneity_and_zero():
    a = random_signal(GEO, CL02, seed=6)
    scaled = a.with_samples(a.samples * -2.5)
    assert norm(scaled) == pytest.approx(2.5 * norm(a), rel=1e-12)
    assert norm(LogPolarSignal.from_channels(GEO, CL02)) == 0.0


def test_cauchy_schwarz():
    for seed in range(10):
        a = random_signal(GEO, CL11, seed=seed)
        b = random_signal(GEO, CL11, seed=seed + 100)
        assert scalar_inner_product(a, b) ** 2 <= norm(a) ** 2 * norm(b) ** 2 * (1 + 1e-12)


def test_split_signal_reconstruction_and_pythagoras():
    pair = default_pair(CL02)
    a = random_signal(GEO, CL02, seed=7)
    plus, minus = split_signal(a, pair)
    assert np.max(np.abs(plus.samples + minus.samples - a.samples)) <= 1e-15
    total = norm(a) ** 2
    assert abs(total - norm(plus) ** 2 - norm(minus) ** 2) <= 1e-12 * total


def test_split_signal_eigenspace_component():
    pair = default_pair(CL02)
    base = random_signal(GEO, CL02, seed=8)
    plus, _ = split_signal(base, pair)
    again_plus, again_minus = split_signal(plus, pair)
    assert np.max(np.abs(again_plus.samples - plus.samples)) <= 1e-12
    assert np.max(np.abs(again_minus.samples)) <= 1e-12


def test_measure_consistency_under_refinement():
    # Riemann-sum smoke test: doubling both resolutions moves the norm < 1%
    def build(geo):
        s = geo.s_values[:, None]
        t = geo.theta_values[None, :]
        channel = 1.0 + 0.5 * np.cos(s) * np.sin(2 * t) + 0.25 * np.sin(2 * s)
        return LogPolarSignal.from_channels(geo, CL02, m0=channel)

    coarse = build(default_geometry(32))
    fine = build(default_geometry(64))
    assert abs(norm(coarse) - norm(fine)) / norm(fine) < 0.01


def test_geometry_mismatch_rejected():
    a = random_signal(GEO, CL02, seed=9)
    b = random_signal(default_geometry(16), CL02, seed=9)
    with pytest.raises(GeometryError):
        inner_product(a, b)


def test_nonfinite_samples_rejected():
    arr = np.zeros((GEO.n_s, GEO.n_theta, 4))
    arr[0, 0, 0] = np.inf
    with pytest.raises(DomainError):
        LogPolarSignal(GEO, CL02, arr)


def test_band_limited_random_signal():
    sig = random_signal(GEO, CL02, seed=10, band_limit=4)
    spec = np.fft.fft2(sig.samples[..., 0])
    fs = np.fft.fftfreq(GEO.n_s, d=1.0 / GEO.n_s)
    ft = np.fft.fftfreq(GEO.n_theta, d=1.0 / GEO.n_theta)
    high = (np.abs(fs)[:, None] > 4) | (np.abs(ft)[None, :] > 4)
    assert np.max(np.abs(spec[high])) <= 1e-10 * np.max(np.abs(spec))


def test_clms_round_trip(tmp_path):
    path = tmp_path / "signal.clms"
    original = random_signal(GridGeometry(16, 32, -1.5, 2.5), CL11, seed=11)
    write_clms(path, original)
    loaded = read_clms(path)
    assert loaded.signature == original.signature
    assert loaded.geometry == original.geometry
    assert np.array_equal(loaded.samples, original.samples)


def test_clms_header_errors(tmp_path):
    path = tmp_path / "bad.clms"
    path.write_bytes(b"algebra=Cl(0,2)\nns=16\n")
    with pytest.raises(FormatError):
        read_clms(path)
    path.write_bytes(b"algebra=Cl(9,9)\nns=4\nntheta=4\nsmin=0\nsmax=1\n")
    with pytest.raises(FormatError):
        read_clms(path)
    good = random_signal(GridGeometry(4, 4, -1.0, 1.0), CL02, seed=1)
    write_clms(path, good)
    data = path.read_bytes()
    path.write_bytes(data[:-8])
    with pytest.raises(FormatError):
        read_clms(path)
