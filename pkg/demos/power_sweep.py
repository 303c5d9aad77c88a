"""Efficiency versus input power: the diode's working window.

Sweeps the mean photon flux over eight decades at the reference
working point and writes the table the plotting frontend consumes
(``frontend`` renders it as the three-panel power figure).
"""

import numpy as np

from wgdiode import sweep_power
from wgdiode.cli import table_to_csv

DELTA = 0.12
THETA = 2.0 * np.pi * 0.982
OUT = "power_sweep.csv"


def main():
    table = sweep_power(DELTA, THETA)
    best = table.max_efficiency()
    print(f"{len(table)} flux points swept")
    print(f"peak efficiency L = {best.efficiency:.3f} at flux {best.flux:.3g}")

    eff = np.array([r.efficiency for r in table])
    flux = np.array([r.flux for r in table])
    window = flux[eff > 0.5]
    if window.size:
        print(f"L > 0.5 for flux in [{window.min():.2g}, {window.max():.2g}]")

    with open(OUT, "w", encoding="utf-8") as fh:
        fh.write(table_to_csv(table))
    print(f"table written to {OUT}")


if __name__ == "__main__":
    main()
