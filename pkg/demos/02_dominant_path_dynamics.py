"""Motion along the dominant path when hbar varies in space.

With hbar = hbar0 exp(k x) a free particle obeys a = k v^2 / 2 and has a
closed-form trajectory. Moving against the gradient the particle
decelerates; moving along it, the speed diverges in finite time. The integrator reproduces
the closed form and conserves W = H / hbar along the way.
"""

import numpy as np
from _common import out_dir

from varhbar import dynamics
from varhbar.errors import DomainError
from varhbar.output import curve_svg

out = out_dir()
for k in (1.0, -1.0):
    x0, v0, _ = dynamics.free_exponential_analytic(k, 1.0, 1.0, 0.0)
    s0 = dynamics.State([x0], [v0])
    field = dynamics.ExponentialField(1.0, [k])
    try:
        tr = dynamics.integrate(s0, field, dynamics.ZeroPotential(), 10.0 if k > 0 else 0.9)
        xa, _, _ = dynamics.free_exponential_analytic(k, 1.0, 1.0, tr.t)
        print(f"k = {k:+}: max |x - x_exact| = {np.max(np.abs(tr.x[:, 0] - xa)):.2e}, "
              f"max W drift = {tr.max_W_drift:.1e}")
        curve_svg(out / f"free_particle_k{k:+.0f}.svg", tr.t, tr.x[:, 0], "t", "x", f"free particle, k = {k:+}")
    except DomainError as exc:
        print(f"k = {k:+}: {exc}")

# Running the k = -1 case past t = 1 hits the finite-time blow-up.
try:
    x0, v0, _ = dynamics.free_exponential_analytic(-1.0, 1.0, 1.0, 0.0)
    dynamics.integrate(dynamics.State([x0], [v0]), dynamics.ExponentialField(1.0, [-1.0]),
                       dynamics.ZeroPotential(), 2.0)
except DomainError as exc:
    print(f"k = -1 beyond t = 1: {exc}")

# Rest radius and null-force speed in an exponentially falling radial field.
f = dynamics.ExponentialRadialField(1.0, 5.0)
print(f"rest radius = {dynamics.rest_radius(f):.3f} (equals L = 5)")
print(f"null-force speed at r = L/2, GM = 1: {dynamics.null_force_speed(f, 1.0, 2.5):.4f}")
