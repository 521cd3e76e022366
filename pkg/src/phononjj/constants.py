"""Physical constants (SI units)."""

# Reduced Planck constant, J s (CODATA 2018 exact value)
HBAR = 1.054571817e-34
