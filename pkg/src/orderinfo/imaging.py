"""Grayscale images, noise models and sliding-window L-estimator denoising."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .distributions import ContinuousDist, salt_pepper_dist
from .lestimator import LEstimator, apply_many, coeffs_salt_pepper, coeffs_sequential
from .measures import profile
from .order_stats import SampleModel

__all__ = [
    "GrayImage",
    "SaltPepperNoise",
    "AdditiveNoise",
    "NoiseSpec",
    "add_noise",
    "estimate_sp_params",
    "quantize",
    "denoise",
    "salt_pepper_filter",
    "denoise_salt_pepper",
    "synthetic_image",
    "PADDING_MODES",
]

PADDING_MODES = ("reflect", "symmetric", "edge")
_ROW_BLOCK = 32


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale raster, row-major, shape (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pixels)
        if p.ndim != 2 or p.size == 0:
            raise ValueError("image must be a nonempty 2-D array")
        if p.dtype != np.uint8:
            if np.any((p < 0) | (p > 255)) or np.any(p != np.round(p)):
                raise ValueError("pixel values must be integers in 0..255")
            p = p.astype(np.uint8)
        p = np.array(p, dtype=np.uint8, copy=True)
        p.setflags(write=False)
        object.__setattr__(self, "pixels", p)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def size(self) -> int:
        return self.pixels.size

    def as_float(self) -> np.ndarray:
        """Pixels scaled to [0, 1]."""
        return self.pixels.astype(np.float64) / 255.0

    def __eq__(self, other) -> bool:
        return isinstance(other, GrayImage) and np.array_equal(self.pixels, other.pixels)

    __hash__ = None


@dataclass(frozen=True)
class SaltPepperNoise:
    rho: float
    rho1: float
    seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.rho <= 1.0 and 0.0 <= self.rho1 <= 1.0):
            raise ValueError("rho and rho1 must lie in [0, 1]")


@dataclass(frozen=True)
class AdditiveNoise:
    dist: ContinuousDist
    seed: int = 0


NoiseSpec = Union[SaltPepperNoise, AdditiveNoise]


def quantize(values: np.ndarray) -> np.ndarray:
    """Round half away from zero, then clamp to 0..255."""
    v = np.asarray(values, dtype=float)
    r = np.where(v >= 0, np.floor(v + 0.5), np.ceil(v - 0.5))
    return np.clip(r, 0, 255).astype(np.uint8)


def add_noise(img: GrayImage, spec: NoiseSpec) -> GrayImage:
    if not isinstance(spec, (SaltPepperNoise, AdditiveNoise)):
        raise TypeError(f"unknown noise spec {spec!r}")
    rng = np.random.default_rng(spec.seed)
    if isinstance(spec, SaltPepperNoise):
        u = rng.random(img.pixels.shape)
        out = img.pixels.copy()
        pepper = spec.rho1 * spec.rho
        out[u < pepper] = 0
        out[(u >= pepper) & (u < spec.rho)] = 255
        return GrayImage(out)
    z = spec.dist.sample_rng(img.pixels.shape, rng)
    return GrayImage(quantize(img.pixels + z))


def estimate_sp_params(img: GrayImage) -> tuple[float, float]:
    """Impulse-noise rate and pepper share from exact 0 and 255 counts."""
    zeros = int(np.count_nonzero(img.pixels == 0))
    peaks = int(np.count_nonzero(img.pixels == 255))
    hit = zeros + peaks
    if hit == 0:
        return 0.0, 0.0
    return hit / img.size, zeros / hit


def _filter_rows(padded: np.ndarray, filt: LEstimator, w: int, start: int, stop: int) -> np.ndarray:
    block = padded[start:stop + w - 1]
    win = sliding_window_view(block, (w, w)).reshape(stop - start, -1, w * w)
    return apply_many(filt, win)


def denoise(img: GrayImage, filt: LEstimator, w: int, padding: str = "reflect", workers: int = 1) -> GrayImage:
    """Replace each pixel by the L-estimate of its w x w neighbourhood."""
    if w < 1 or w % 2 == 0:
        raise ValueError(f"window side must be a positive odd integer, got {w}")
    if w * w != filt.n:
        raise ValueError(f"a {w}x{w} window has {w * w} values but the filter has {filt.n} coefficients")
    if padding not in PADDING_MODES:
        raise ValueError(f"padding must be one of {PADDING_MODES}")
    h = w // 2
    src = img.pixels.astype(np.float64)
    if padding == "reflect" and h >= min(src.shape):
        raise ValueError("window too large for reflect padding on this image")
    padded = np.pad(src, h, mode=padding)
    spans = [(r, min(r + _ROW_BLOCK, img.height)) for r in range(0, img.height, _ROW_BLOCK)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda s: _filter_rows(padded, filt, w, *s), spans))
    else:
        parts = [_filter_rows(padded, filt, w, *s) for s in spans]
    return GrayImage(quantize(np.concatenate(parts, axis=0)))


def salt_pepper_filter(rho: float, rho1: float, w: int, rule: str = "entropy", d: int = 4,
                       clean_value: float = 128.0) -> LEstimator:
    """L-estimator for a w x w window under impulse noise (rho, rho1).

    Entropies depend only on the three masses, not on where the clean value
    sits, so ``clean_value`` is a placeholder inside (0, 255).
    """
    model = SampleModel(w * w, salt_pepper_dist(clean_value, rho, rho1))
    if rule == "entropy":
        return coeffs_salt_pepper(profile(model, 1), rho)
    if rule == "sequential":
        return coeffs_sequential(model, min(d, model.n))
    raise ValueError("rule must be 'entropy' or 'sequential'")


def denoise_salt_pepper(img: GrayImage, w: int, rule: str = "entropy", d: int = 4,
                        params: tuple[float, float] | None = None, workers: int = 1) -> GrayImage:
    """Estimate noise parameters (unless given), build the filter, apply it."""
    rho, rho1 = estimate_sp_params(img) if params is None else params
    if rho == 0.0:
        return GrayImage(img.pixels)
    filt = salt_pepper_filter(rho, rho1, w, rule, d)
    return denoise(img, filt, w, workers=workers)


def synthetic_image(size: int = 256, seed: int = 0) -> GrayImage:
    """Smooth background with rectangles, discs and a triangle; values in 20..235."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:size, 0:size] / max(size - 1, 1)
    img = 60.0 + 60.0 * xx + 30.0 * yy
    for _ in range(4):
        x0, y0 = rng.uniform(0.05, 0.6, 2)
        wd, ht = rng.uniform(0.15, 0.35, 2)
        inside = (xx >= x0) & (xx <= x0 + wd) & (yy >= y0) & (yy <= y0 + ht)
        img[inside] = rng.uniform(20, 235)
    for _ in range(4):
        cx, cy = rng.uniform(0.15, 0.85, 2)
        rad = rng.uniform(0.06, 0.16)
        img[(xx - cx) ** 2 + (yy - cy) ** 2 <= rad * rad] = rng.uniform(20, 235)
    # triangle below the line y = x shifted
    tri = (yy > 0.7) & (xx > 0.1) & (yy - 0.7 < (xx - 0.1)) & (xx < 0.5)
    img[tri] = rng.uniform(20, 235)
    return GrayImage(np.clip(np.round(img), 20, 235).astype(np.uint8))
