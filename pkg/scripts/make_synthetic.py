"""Regenerate the bundled synthetic 54-location readings file.

Readings follow a shared diurnal cycle with per-location offsets and AR(1)
noise; humidity moves against temperature. Sampled every 30 minutes.
"""

import sys
from pathlib import Path

import numpy as np

LOCATIONS = 54
TIMESTEPS = 600


def main(out: Path) -> None:
    rng = np.random.default_rng(20040228)
    hours = np.arange(TIMESTEPS) / 2.0
    cycle = np.sin(2 * np.pi * (hours - 9) / 24)
    offset = rng.normal(0.0, 1.5, LOCATIONS)
    gain = rng.uniform(2.0, 5.0, LOCATIONS)
    with out.open("w", newline="") as fh:
        fh.write("location,timestep,temperature,humidity\n")
        for loc in range(LOCATIONS):
            noise = np.zeros(TIMESTEPS)
            for k in range(1, TIMESTEPS):
                noise[k] = 0.8 * noise[k - 1] + rng.normal(0.0, 0.6)
            temp = 21.0 + offset[loc] + gain[loc] * cycle + noise
            humid = 38.0 - 1.8 * (temp - 21.0) + rng.normal(0.0, 2.0, TIMESTEPS)
            for k in range(TIMESTEPS):
                fh.write(f"{loc + 1},{k + 1},{temp[k]:.2f},{humid[k]:.2f}\n")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parents[1] / "src/polybimatroid/data/synthetic54.csv")
