"""Is an asymmetric diode better?  Scanning the coupling ratio.

Holds the detuning, phase and power at the reference working point and
varies the ratio of the two atom-waveguide couplings.  Equal couplings
win: a weaker second atom reflects less when it should mirror, a
stronger one saturates the contrast away.
"""

from wgdiode import gamma_ratio_scan

DELTA = 0.12
THETA = 2.0 * 3.141592653589793 * 0.982
FLUX = 0.1


def main():
    ratios = [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
    rows = gamma_ratio_scan(DELTA, THETA, FLUX, ratios)
    print(f"{'gamma2/gamma1':>13} {'L':>8}")
    for ratio, eff in rows:
        bar = "#" * int(round(40 * eff))
        print(f"{ratio:13.3f} {eff:8.4f}  {bar}")
    best_ratio, best_eff = max(rows, key=lambda rl: rl[1])
    print(f"\nbest ratio: {best_ratio:g}  (L = {best_eff:.4f})")


if __name__ == "__main__":
    main()
