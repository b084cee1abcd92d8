"""Unit conventions shared by all modules.

Times are in picoseconds, energies in meV, rates in 1/ps. A rate quoted as
an energy (e.g. the cavity out-coupling) is converted by dividing by HBAR.
"""

# hbar in meV * ps
HBAR = 0.6582119569
