"""Multivector-valued signals on a uniform log-polar grid.

The grid discretizes (r, theta) through s = ln r: scaling the source becomes
a cyclic shift along s and rotation a cyclic shift along theta.  The radial
window [s_min, s_max) is treated as periodic with period S = s_max - s_min,
and the integration measure dtheta dr/r becomes the uniform weight ds*dtheta,
which keeps the discrete transform pair exactly invertible.

Signals are immutable after construction.  Reductions (inner products,
norms) run as single numpy sums over the fixed row-major layout, so results
are deterministic run to run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Multivector, Signature, gp, principal_reverse_signs, scalar_product_array
from .errors import DomainError, FormatError, GeometryError, SignatureMismatchError
from .roots import RootPair
from .split import split_array

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class GridGeometry:
    """Uniform periodic grid in (s = ln r, theta).

    theta spans [0, 2*pi) with step 2*pi/n_theta; s spans [s_min, s_max)
    with step (s_max - s_min)/n_s and is treated as cyclic with period
    span = s_max - s_min.
    """

    n_s: int
    n_theta: int
    s_min: float
    s_max: float

    def __post_init__(self):
        for n, label in ((self.n_s, "n_s"), (self.n_theta, "n_theta")):
            if n < 2 or n % 2 != 0:
                raise GeometryError(f"{label} must be even and >= 2, got {n}")
        if not (np.isfinite(self.s_min) and np.isfinite(self.s_max)):
            raise GeometryError("s_min and s_max must be finite")
        if not self.s_max > self.s_min:
            raise GeometryError(f"need s_max > s_min, got [{self.s_min}, {self.s_max}]")

    @property
    def span(self) -> float:
        return self.s_max - self.s_min

    @property
    def ds(self) -> float:
        return self.span / self.n_s

    @property
    def dtheta(self) -> float:
        return TWO_PI / self.n_theta

    @property
    def dv(self) -> float:
        """Radial frequency step 2*pi/span."""
        return TWO_PI / self.span

    @property
    def s_values(self) -> np.ndarray:
        return self.s_min + self.ds * np.arange(self.n_s)

    @property
    def theta_values(self) -> np.ndarray:
        return self.dtheta * np.arange(self.n_theta)

    @property
    def v_values(self) -> np.ndarray:
        """Centered radial frequencies 2*pi*j/span, j = -n_s/2 .. n_s/2 - 1."""
        return self.dv * np.arange(-self.n_s // 2, self.n_s // 2)

    @property
    def k_values(self) -> np.ndarray:
        """Centered integer angular frequencies."""
        return np.arange(-self.n_theta // 2, self.n_theta // 2).astype(float)

    @property
    def is_symmetric(self) -> bool:
        """True when s_min = -s_max, so s -> -s is a grid automorphism."""
        return abs(self.s_min + self.s_max) <= 1e-12 * max(1.0, abs(self.s_max))


def default_geometry(n: int = 64) -> GridGeometry:
    return GridGeometry(n, n, -np.pi, np.pi)


class LogPolarSignal:
    """Multivector samples on a GridGeometry, stored as an (n_s, n_theta, 4) array."""

    def __init__(self, geometry: GridGeometry, signature: Signature, samples: np.ndarray):
        arr = np.array(samples, dtype=float)
        expected = (geometry.n_s, geometry.n_theta, 4)
        if arr.shape != expected:
            raise GeometryError(f"samples shape {arr.shape} does not match grid {expected}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("signal samples must be finite")
        arr.flags.writeable = False
        self.geometry = geometry
        self.signature = signature
        self.samples = arr

    @classmethod
    def from_channels(cls, geometry, signature, m0=0.0, m1=0.0, m2=0.0, m12=0.0):
        """Build a signal from per-blade channels (scalars or (n_s, n_theta) arrays)."""
        shape = (geometry.n_s, geometry.n_theta)
        arr = np.zeros(shape + (4,))
        for i, channel in enumerate((m0, m1, m2, m12)):
            arr[..., i] = np.broadcast_to(channel, shape)
        return cls(geometry, signature, arr)

    @classmethod
    def constant(cls, geometry, value: Multivector) -> "LogPolarSignal":
        arr = np.broadcast_to(value.coeffs, (geometry.n_s, geometry.n_theta, 4))
        return cls(geometry, value.signature, arr.copy())

    def sample_at(self, i: int, t: int) -> Multivector:
        return Multivector(self.signature, self.samples[i, t])

    def with_samples(self, samples: np.ndarray) -> "LogPolarSignal":
        return LogPolarSignal(self.geometry, self.signature, samples)

    def max_abs_diff(self, other: "LogPolarSignal") -> float:
        _check_compatible(self, other)
        return float(np.max(np.abs(self.samples - other.samples)))


def _check_compatible(a: LogPolarSignal, b: LogPolarSignal) -> None:
    if a.signature != b.signature:
        raise SignatureMismatchError(
            f"signals in {a.signature.name} and {b.signature.name}"
        )
    if a.geometry != b.geometry:
        raise GeometryError("signals live on different grids")


def inner_product(a: LogPolarSignal, b: LogPolarSignal) -> Multivector:
    """Grid sum of a * ~b weighted by ds*dtheta (the measure dtheta dr/r)."""
    _check_compatible(a, b)
    flipped = b.samples * principal_reverse_signs(a.signature)
    products = gp(a.signature, a.samples, flipped)
    total = products.reshape(-1, 4).sum(axis=0)
    return Multivector(a.signature, total * (a.geometry.ds * a.geometry.dtheta))


def scalar_inner_product(a: LogPolarSignal, b: LogPolarSignal) -> float:
    """Scalar part of the inner product; symmetric in its arguments."""
    _check_compatible(a, b)
    flipped = b.samples * principal_reverse_signs(a.signature)
    values = scalar_product_array(a.signature, a.samples, flipped)
    return float(values.sum() * a.geometry.ds * a.geometry.dtheta)


def norm(a: LogPolarSignal) -> float:
    """L2 norm: sqrt of the measure-weighted sum of squared moduli."""
    total = float(np.sum(a.samples * a.samples))
    return float(np.sqrt(total * a.geometry.ds * a.geometry.dtheta))


def split_signal(a: LogPolarSignal, pair: RootPair) -> tuple[LogPolarSignal, LogPolarSignal]:
    """Pointwise split of every sample with respect to the pair."""
    if a.signature != pair.signature:
        raise SignatureMismatchError(
            f"signal in {a.signature.name}, roots in {pair.signature.name}"
        )
    plus, minus = split_array(a.samples, pair)
    return a.with_samples(plus), a.with_samples(minus)


def random_signal(
    geometry: GridGeometry,
    signature: Signature,
    seed: int,
    band_limit: int | None = None,
    channels: tuple[int, ...] = (0, 1, 2, 3),
) -> LogPolarSignal:
    """Deterministic random signal; band_limit keeps only |frequency| <= limit
    on both axes (the mask is symmetric, so samples stay real)."""
    rng = np.random.default_rng(seed)
    arr = np.zeros((geometry.n_s, geometry.n_theta, 4))
    for c in channels:
        field = rng.uniform(-1.0, 1.0, size=(geometry.n_s, geometry.n_theta))
        if band_limit is not None:
            spec = np.fft.fft2(field)
            fs = np.fft.fftfreq(geometry.n_s, d=1.0 / geometry.n_s)
            ft = np.fft.fftfreq(geometry.n_theta, d=1.0 / geometry.n_theta)
            mask = (np.abs(fs)[:, None] <= band_limit) & (np.abs(ft)[None, :] <= band_limit)
            field = np.fft.ifft2(spec * mask).real
        arr[..., c] = field
    return LogPolarSignal(geometry, signature, arr)


# -- CLMS v1 file format ---------------------------------------------------------


def _format_header(fields: list[tuple[str, str]]) -> bytes:
    return "".join(f"{key}={value}\n" for key, value in fields).encode("ascii")


def _read_header(data: bytes, keys: list[str]) -> tuple[dict, int]:
    """Parse newline-terminated key=value lines in the given order."""
    values = {}
    offset = 0
    for key in keys:
        end = data.find(b"\n", offset)
        if end < 0:
            raise FormatError(f"truncated header, missing {key}=")
        line = data[offset:end].decode("ascii", errors="replace")
        if "=" not in line:
            raise FormatError(f"malformed header line {line!r}")
        name, _, value = line.partition("=")
        if name != key:
            raise FormatError(f"expected header key {key!r}, found {name!r}")
        values[key] = value
        offset = end + 1
    return values, offset


def write_clms(path, signal: LogPolarSignal) -> None:
    """CLMS v1: text header, then little-endian float64 samples, four blade
    coefficients per sample in row-major sample order."""
    geo = signal.geometry
    header = _format_header(
        [
            ("algebra", signal.signature.name),
            ("ns", str(geo.n_s)),
            ("ntheta", str(geo.n_theta)),
            ("smin", repr(geo.s_min)),
            ("smax", repr(geo.s_max)),
        ]
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(signal.samples, dtype="<f8").tobytes())


def read_clms(path) -> LogPolarSignal:
    with open(path, "rb") as fh:
        data = fh.read()
    fields, offset = _read_header(data, ["algebra", "ns", "ntheta", "smin", "smax"])
    try:
        sig = Signature.parse(fields["algebra"])
        geo = GridGeometry(
            int(fields["ns"]),
            int(fields["ntheta"]),
            float(fields["smin"]),
            float(fields["smax"]),
        )
    except (ValueError, DomainError) as exc:
        raise FormatError(f"invalid CLMS header: {exc}") from exc
    expected = geo.n_s * geo.n_theta * 4
    payload = np.frombuffer(data, dtype="<f8", offset=offset)
    if payload.size != expected:
        raise FormatError(
            f"CLMS payload holds {payload.size} floats, expected {expected}"
        )
    return LogPolarSignal(geo, sig, payload.reshape(geo.n_s, geo.n_theta, 4))
