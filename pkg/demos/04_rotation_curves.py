"""What hbar(r) would hold a galaxy's rotation curve flat?

Around a visible point mass, a constant 150 km/s speed needs hbar to dip
below its inner value and recover outward. The minimum sits exactly where
the Newtonian circular speed equals the flat speed.
"""

from _common import out_dir

from varhbar import galaxy
from varhbar.constants import G, KPC
from varhbar.output import curve_svg, write_csv

out = out_dir()
for M, r_out in ((9e10, 30.0), (1.3e11, 60.0)):
    prob = galaxy.RotationProblem.from_astro(150.0, M, 10.0, r_out)
    sol = galaxy.invert_rotation_curve(prob)
    r_star = galaxy.r_at_newtonian_balance(prob.v_flat, G * prob.M_visible)
    print(f"M = {M:.2g} Msun: min factor {sol.min_factor:.4f} at {sol.r_min / KPC:.2f} kpc "
          f"(GM/v^2 = {r_star / KPC:.2f} kpc)")
    stem = f"rotation_{M:.2g}"
    write_csv(out / f"{stem}.csv", ["r_kpc", "ln_hbar_rel", "factor"], [sol.r / KPC, sol.ln_hbar_rel, sol.factor])
    curve_svg(out / f"{stem}.svg", sol.r / KPC, sol.factor, "r [kpc]", "hbar(r) / hbar(r_in)", stem)
