"""Physical constants and unit conversions (SI throughout)."""

from scipy import constants as _sc

C = _sc.c
G = _sc.G
HBAR = _sc.hbar

M_SUN = 1.98847e30  # kg
KPC = 1e3 * _sc.parsec  # m
YEAR = _sc.Julian_year  # s
HOUR = 3600.0
ARCSEC = _sc.arcsec  # rad

# Hubble time used as the calibration epoch (13.8 Gyr).
T_HUBBLE = 4.35e17
