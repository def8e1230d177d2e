"""Independent reference values frozen into the unit tests.

Requires numpy. Run: python3 tests/support/reference_values.py
"""
from decimal import Decimal, getcontext

import numpy as np

getcontext().prec = 40
PI = Decimal("3.141592653589793238462643383279502884197")
C_NM_PER_PS = Decimal("299792.458")


def detuning(lam, center):
    return 2 * PI * C_NM_PER_PS * (1 / Decimal(lam) - 1 / Decimal(center))


def bandwidth(fwhm_nm, center_nm=796.0):
    c = 299792.458
    return 2 * np.pi * c * (1 / (center_nm - fwhm_nm / 2) - 1 / (center_nm + fwhm_nm / 2))


def calibrated_table(grid=512, sigma=8.6, kappa_s=1.59, kappa_i=1.05, length=1.45):
    d = abs(kappa_s - kappa_i)
    span = 8 * max(sigma, 2 * np.pi / (length * d), sigma * max(abs(kappa_s), abs(kappa_i)) / d)
    w = (np.arange(grid) - (grid - 1) / 2) * span / (grid - 1)
    s, i = np.meshgrid(w, w, indexing="ij")
    f = np.exp(-(s + i) ** 2 / (4 * sigma**2)) * np.sinc((kappa_s * s + kappa_i * i) * length / 2 / np.pi)
    f /= np.linalg.norm(f)
    lam = np.linalg.svd(f, compute_uv=False)
    rows = []
    for fw in (1.0, 2.5, 10.0, None):
        if fw is None:
            t = np.ones(grid)
        else:
            sf = bandwidth(fw) / (2 * np.sqrt(2 * np.log(2)))
            t = np.exp(-(w**2) / (4 * sf**2))
        ks = []
        for a in (f @ f.T, f.T @ f):
            a = t[:, None] * a * t[None, :]
            ks.append(np.trace(a) ** 2 / np.sum(a * a))
        rows.append(tuple(ks))
    return 1 / np.sum(lam**4), rows


if __name__ == "__main__":
    print("detuning(786, 796) =", detuning(786, 796))
    print("detuning(795, 796) =", detuning(795, 796))
    k, rows = calibrated_table()
    print("K(SVD) =", repr(k))
    for fw, (ks, ki) in zip(("1", "2.5", "10", "none"), rows):
        print(f"{fw:5s} K_s = {ks!r}  K_i = {ki!r}")
