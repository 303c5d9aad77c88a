"""Map of the rectification efficiency over detuning and phase.

Scans the atom-1 detuning against the propagation phase at fixed input
power, prints a coarse text rendering of the efficiency landscape, and
writes the full-resolution table for the plotting frontend.
"""

import numpy as np

from wgdiode import SweepGrid, sweep_map
from wgdiode.cli import table_to_csv

FLUX = 0.1
OUT = "efficiency_map.csv"
SHADES = " .:-=+*#%@"


def main():
    grid = SweepGrid.map_grid(FLUX)
    table = sweep_map(grid)
    best = table.max_efficiency()
    print(f"{len(table)} points at flux {FLUX}")
    print(
        f"peak L = {best.efficiency:.3f} at detuning {best.delta:+.3f}, "
        f"phase {best.theta / (2 * np.pi):.3f} * 2*pi"
    )

    n_d, n_t = len(grid.delta_axis), len(grid.theta_axis)
    eff = np.nan_to_num(
        np.array([r.efficiency for r in table]).reshape(n_d, n_t), nan=0.0
    )
    print("\nphase (rows, 0 -> 2*pi) versus detuning (cols, -2 -> +2):")
    for j in range(0, n_t, 5):
        line = "".join(
            SHADES[min(int(eff[i, j] * len(SHADES)), len(SHADES) - 1)]
            for i in range(0, n_d, 2)
        )
        print(f"  {line}")

    with open(OUT, "w", encoding="utf-8") as fh:
        fh.write(table_to_csv(table))
    print(f"\ntable written to {OUT}")


if __name__ == "__main__":
    main()
