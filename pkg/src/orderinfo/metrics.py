"""Image fidelity metrics on [0, 1] float views.

Local statistics come from exact integer box sums over every fully
contained window; reductions use ``math.fsum`` so results do not depend on
evaluation order.
"""
from __future__ import annotations

import math

import numpy as np

from .imaging import GrayImage

__all__ = ["mse", "psnr", "ssim", "iqi", "report", "WINDOW", "C1", "C2"]

WINDOW = 8
C1 = 0.01**2
C2 = 0.03**2


def _pair(a: GrayImage, b: GrayImage) -> tuple[np.ndarray, np.ndarray]:
    if a.pixels.shape != b.pixels.shape:
        raise ValueError(f"image sizes differ: {a.pixels.shape} vs {b.pixels.shape}")
    return a.as_float(), b.as_float()


def mse(a: GrayImage, b: GrayImage) -> float:
    x, y = _pair(a, b)
    return math.fsum(((x - y) ** 2).ravel()) / x.size


def psnr(a: GrayImage, b: GrayImage) -> float:
    """10 log10(1 / mse) with peak value 1; +inf for identical images."""
    e = mse(a, b)
    return math.inf if e == 0.0 else 10.0 * math.log10(1.0 / e)


def _box_sum(x: np.ndarray, w: int) -> np.ndarray:
    s = np.zeros((x.shape[0] + 1, x.shape[1] + 1), dtype=np.int64)
    s[1:, 1:] = x.cumsum(axis=0).cumsum(axis=1)
    return s[w:, w:] - s[:-w, w:] - s[w:, :-w] + s[:-w, :-w]


def _local_stats(a: GrayImage, b: GrayImage, w: int):
    """Window means, sample variances and covariance on the [0, 1] scale.

    Sums run over raw integer pixels so they are exact; flat windows get a
    variance of exactly zero.
    """
    if a.pixels.shape != b.pixels.shape:
        raise ValueError(f"image sizes differ: {a.pixels.shape} vs {b.pixels.shape}")
    if min(a.pixels.shape) < w:
        raise ValueError(f"image smaller than the {w}x{w} metric window")
    x = a.pixels.astype(np.int64)
    y = b.pixels.astype(np.int64)
    npix = w * w
    sx, sy = _box_sum(x, w), _box_sum(y, w)
    dxx = npix * _box_sum(x * x, w) - sx * sx
    dyy = npix * _box_sum(y * y, w) - sy * sy
    dxy = npix * _box_sum(x * y, w) - sx * sy
    var_scale = 1.0 / (npix * (npix - 1.0) * 255.0 * 255.0)
    mean_scale = 1.0 / (npix * 255.0)
    return sx * mean_scale, sy * mean_scale, dxx * var_scale, dyy * var_scale, dxy * var_scale


def ssim(a: GrayImage, b: GrayImage, window: int = WINDOW) -> float:
    """Mean structural similarity over all window positions."""
    mx, my, vx, vy, cxy = _local_stats(a, b, window)
    num = (2 * mx * my + C1) * (2 * cxy + C2)
    den = (mx * mx + my * my + C1) * (vx + vy + C2)
    return math.fsum((num / den).ravel()) / num.size


def iqi(a: GrayImage, b: GrayImage, window: int = WINDOW) -> float:
    """Universal image quality index, mean over all window positions.

    Flat windows follow the usual conventions: when both variances vanish
    only the luminance term counts, when both means vanish only the
    structure term does, and a window flat and black in both images scores 1.
    """
    mx, my, vx, vy, cxy = _local_stats(a, b, window)
    msum = mx * mx + my * my
    vsum = vx + vy
    with np.errstate(invalid="ignore", divide="ignore"):
        struct = np.where(vsum > 0, 2 * cxy / vsum, 1.0)
        lum = np.where(msum > 0, 2 * mx * my / msum, 1.0)
    q = np.clip(struct * lum, -1.0, 1.0)
    return math.fsum(q.ravel()) / q.size


def report(a: GrayImage, b: GrayImage) -> dict[str, float]:
    return {"mse": mse(a, b), "psnr": psnr(a, b), "ssim": ssim(a, b), "iqi": iqi(a, b)}
