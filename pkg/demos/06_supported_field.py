"""A field whose kinetic term is weighted by hbar^2.

In a slowly growing hbar background the supported field obeys a damped
wave equation. Far from the origin its time factor follows the closed
two-exponential form; here the radial method-of-lines solver is checked
against the exact Bessel-function solution and its convergence order is
measured.
"""

import math

import numpy as np
from _common import out_dir
from scipy.special import j0, j1, y0, y1

from varhbar import coupled, profiles
from varhbar.constants import C
from varhbar.output import write_csv

L, p = 2000.0, 0.5
prof = profiles.HbarProfile(A0=1.0, L_t=L)
z0 = p * L
a, b = np.linalg.solve([[j0(z0), y0(z0)], [-j1(z0), -y1(z0)]], [1.0, 0.0])

errs = []
for h in (0.1, 0.05, 0.025):
    r = np.arange(0, 200 + h / 2, h)
    grid = coupled.RadialGrid(r, np.arange(0, 60 + 1e-9, 0.5 * h))
    sol = coupled.solve_supported_field_radial(prof, grid, omega_p=p * C)
    z = p * (L + grid.x0[-1])
    exact = np.sinc(p * r / math.pi) * (a * j0(z) + b * y0(z))
    mask = r < 139
    errs.append(np.max(np.abs(sol.phi[-1][mask] - exact[mask])))
    print(f"h = {h:<6} max error vs Bessel solution = {errs[-1]:.2e}")
print(f"observed orders: {[round(math.log2(errs[i] / errs[i + 1]), 2) for i in range(2)]}")
write_csv(out_dir() / "supported_field_final.csv", ["r_m", "x0_m", "phi"],
          [sol.r, np.full_like(sol.r, sol.x0[-1]), sol.phi[-1]])

t = np.linspace(0, 40, 9)
print("closed-form time factor, overdamped vs oscillatory:")
print("  ", np.round(coupled.time_factor_from_initial(3.0, 1.0, 1.0, 0.0, t), 4))
print("  ", np.round(coupled.time_factor_from_initial(0.2, 1.0, 1.0, 0.0, t), 4))
