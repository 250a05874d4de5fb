"""Steering vectors and transmit beampatterns of simple waveform sets.

Run:  python3 demos/beampattern_basics.py

Prints a beampattern table for two 4-element waveform sets (all-ones and a
chirp family) and, when matplotlib is importable, saves beampattern_basics.png
next to this script.
"""

import numpy as np

from wisebeam import beampattern, generate_reference, steering_vector
from wisebeam.refwave import ReferenceSpec

M, N = 4, 16
grid = np.arange(-90.0, 91.0, 5.0)

print("steering vector at 30 degrees, half-wavelength spacing:")
print(np.round(steering_vector(30.0, M), 4))

coherent = np.ones((M, N), dtype=complex)
chirp = generate_reference(ReferenceSpec.from_string("chirp"), M, N)

print(f"\n{'theta':>6} {'all-ones':>10} {'chirp':>10}   (power, max M^2 = {M**2})")
for theta in grid[::3]:
    p1 = beampattern(coherent, theta)
    p2 = beampattern(chirp, theta)
    bar = "#" * int(round(p1 / M**2 * 30))
    print(f"{theta:6.0f} {p1:10.3f} {p2:10.3f}   {bar}")

print("\nThe all-ones set focuses everything at broadside; the chirp family")
print("spreads power across angle, which is the uncorrelated-waveform limit.")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    for name, s in [("all-ones", coherent), ("chirp family", chirp)]:
        powers = [beampattern(s, t) for t in grid]
        ax.plot(grid, 10 * np.log10(np.maximum(powers, 1e-12)), label=name)
    ax.set_xlabel("angle (deg)")
    ax.set_ylabel("beampattern (dB)")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(__file__.replace(".py", ".png"), dpi=120)
    print("saved beampattern_basics.png")
except ImportError:
    pass
