"""Seeded generators of processes with known stylized-fact signatures.

Random numbers come from numpy's PCG64 bit generator seeded with the integer
``seed``. Uniforms are ``Generator.random`` doubles, ``(next_uint64 >> 11) *
2**-53`` in [0, 1). Gaussian variates are produced from consecutive uniform
pairs with the Box-Muller transform

    z0 = sqrt(-2 ln(1 - u0)) cos(2 pi u1)
    z1 = sqrt(-2 ln(1 - u0)) sin(2 pi u1)

so any PCG64 implementation reproduces the series bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpec
from .series import ReturnSeries

BURN_IN = 1000

DEFAULTS = {
    "iid-gaussian": {"sigma": 1.0},
    "ar1": {"phi": 0.5, "sigma": 1.0},
    "pareto-tail": {"k": 3.0, "x_min": 1.0},
    "sym-condvol": {"omega": 1e-5, "a": 0.1, "b": 0.8},
    "asym-condvol": {"omega": 1e-5, "a": 0.02, "b": 0.6, "gamma": 0.3},
}


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    length: int
    seed: int = 0
    params: dict = field(default_factory=dict)
    delta_t: float = 18000.0
    start_time: float = 0.0

    def __post_init__(self):
        if self.kind not in DEFAULTS:
            raise InvalidSpec(f"unknown generator kind {self.kind!r}")
        unknown = set(self.params) - set(DEFAULTS[self.kind])
        if unknown:
            raise InvalidSpec(f"unknown parameter(s) {sorted(unknown)} for {self.kind}")
        object.__setattr__(self, "params", {**DEFAULTS[self.kind], **self.params})
        if int(self.length) < 2:
            raise InvalidSpec("length must be at least 2")
        if not self.delta_t > 0:
            raise InvalidSpec("delta_t must be positive")
        _check(self.kind, self.params)


def _check(kind, p):
    def need(cond, msg):
        if not cond:
            raise InvalidSpec(f"{kind}: {msg}")

    if "sigma" in p:
        need(p["sigma"] > 0, "sigma must be positive")
    if kind == "ar1":
        need(abs(p["phi"]) < 1, "|phi| must be < 1")
    elif kind == "pareto-tail":
        need(p["k"] > 1, "k must be > 1")
        need(p["x_min"] > 0, "x_min must be positive")
    elif kind in ("sym-condvol", "asym-condvol"):
        gamma = p.get("gamma", 0.0)
        need(p["omega"] > 0, "omega must be positive")
        need(p["a"] >= 0 and p["b"] >= 0 and gamma >= 0, "a, b, gamma must be non-negative")
        need(p["a"] + p["b"] + gamma / 2 < 1, "a + b + gamma/2 must be < 1")


def rng_for(seed):
    return np.random.Generator(np.random.PCG64(seed))


def box_muller(rng, n):
    """``n`` standard normals from ``2 * ceil(n / 2)`` uniforms."""
    m = (n + 1) // 2
    u = rng.random(2 * m)
    rad = np.sqrt(-2.0 * np.log1p(-u[0::2]))
    ang = 2.0 * np.pi * u[1::2]
    z = np.empty(2 * m)
    z[0::2] = rad * np.cos(ang)
    z[1::2] = rad * np.sin(ang)
    return z[:n]


def _ar1(phi, sigma, eps):
    x = np.empty(eps.size)
    prev = eps[0] * sigma / math.sqrt(1.0 - phi * phi)
    x[0] = prev
    for t in range(1, eps.size):
        prev = phi * prev + sigma * eps[t]
        x[t] = prev
    return x


def _condvol(omega, a, b, gamma, z):
    out = np.empty(z.size)
    zl = z.tolist()
    s2 = omega / (1.0 - a - b - gamma / 2.0)
    r = math.sqrt(s2) * zl[0]
    out[0] = r
    for t in range(1, len(zl)):
        shock = a + gamma if r < 0 else a
        s2 = omega + shock * r * r + b * s2
        r = math.sqrt(s2) * zl[t]
        out[t] = r
    return out


def generate(spec):
    """Draw the series described by ``spec`` as a :class:`ReturnSeries`."""
    rng = rng_for(spec.seed)
    n = int(spec.length)
    p = spec.params
    if spec.kind == "iid-gaussian":
        values = p["sigma"] * box_muller(rng, n)
    elif spec.kind == "ar1":
        values = _ar1(p["phi"], p["sigma"], box_muller(rng, n))
    elif spec.kind == "pareto-tail":
        u = rng.random(2 * n)
        mags = p["x_min"] * (1.0 - u[0::2]) ** (-1.0 / p["k"])
        values = np.where(u[1::2] < 0.5, -mags, mags)
    else:
        z = box_muller(rng, n + BURN_IN)
        values = _condvol(p["omega"], p["a"], p["b"], p.get("gamma", 0.0), z)[BURN_IN:]
    return ReturnSeries(values, spec.delta_t, spec.start_time)


def spliced_sample(n, k=3.0, x_splice=2.0, body_rate=1.0, seed=0):
    """Positive sample: truncated exponential below ``x_splice``, Pareto above.

    The mixture weight makes the density continuous at the splice, so the
    only sign of the change is the bend in slope. Returns ``(values,
    tail_fraction)``.
    """
    if not (k > 0 and x_splice > 0 and body_rate > 0):
        raise InvalidSpec("k, x_splice and body_rate must be positive")
    mass = -math.expm1(-body_rate * x_splice)
    body_density = body_rate * math.exp(-body_rate * x_splice) / mass
    tail_fraction = body_density / (body_density + k / x_splice)
    rng = rng_for(seed)
    u = rng.random(3 * n)
    in_tail = u[0::3] < tail_fraction
    tail = x_splice * (1.0 - u[1::3]) ** (-1.0 / k)
    body = -np.log1p(-(1.0 - u[2::3]) * mass) / body_rate
    return np.where(in_tail, tail, body), tail_fraction
