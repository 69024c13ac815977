"""A cosmological constant from a quadratic hbar variation.

If hbar = hbar_o + b (a x)^2 in a closed geometry, an a-independent term
appears in the Friedmann equation and acts like Lambda / 3. This demo
converts between b, Lambda and the vacuum energy density, then evolves a
matter + Lambda universe and checks it against the analytic sinh^(2/3)
solution.
"""

import math

import numpy as np
from _common import out_dir

from varhbar import cosmo
from varhbar.constants import C, G, HBAR
from varhbar.output import write_csv

lam = 9.95e-36
print(f"b for Lambda = {lam:.3g} 1/s^2: {cosmo.b_from_lambda(lam):.4e} J s/m^2")
print(f"hbar reaches zero at r = {cosmo.zero_radius(lam):.4e} m")
print(f"5.63e-10 J/m^3 -> {cosmo.lambda_unit_convert(5.63e-10):.4e} 1/s^2")

lam3, Km = 1e-36, 1e-36
k = 1e-70
p = cosmo.CosmoParams(rho=Km * 3 / (8 * math.pi * G), k_curv=k, b=-lam3 * HBAR / (k * C**2), x=1.0)
H = math.sqrt(lam3)
t0 = 0.1 / H
a_exact = lambda t: (Km / lam3) ** (1 / 3) * np.sinh(1.5 * H * t) ** (2 / 3)  # noqa: E731
run = cosmo.integrate_scale_factor(p, float(a_exact(t0)), (t0, 4 / H))
print(f"max rel. deviation from sinh^(2/3): {np.max(np.abs(run.a / a_exact(run.t) - 1)):.2e}; "
      f"constraint residual {run.constraint_residual:.1e}")
write_csv(out_dir() / "friedmann_matter_lambda.csv", ["t_s", "a", "rhs"], [run.t, run.a, run.rhs])
