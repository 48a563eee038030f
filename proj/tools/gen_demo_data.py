#!/usr/bin/env python3
"""Regenerates the bundled demo dataset (data/demo).

Three mock activity classes, six recordings each, 104 time steps of six
channels at 50 Hz. Signals are class-dependent sinusoid mixtures plus LCG
noise so the files are reproducible from this script alone.
"""

import math
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "data", "demo")
CLASSES = ["walk", "sit", "wave"]
CHANNELS = ["ax", "ay", "az", "gx", "gy", "gz"]
T = 104
RATE = 50.0


class Lcg:
    def __init__(self, seed):
        self.state = seed & 0xFFFFFFFFFFFFFFFF

    def next(self):
        self.state = (self.state * 6364136223846793005 + 1442695040888963407) & 0xFFFFFFFFFFFFFFFF
        return self.state

    def uniform(self):  # in [-1, 1)
        return self.next() / 2**63 - 1.0


# Per-class per-channel (amplitude, frequency Hz, offset). Classes differ in
# dominant frequency and energy distribution across channels.
PARAMS = {
    "walk": [(1.2, 2.0, 0.0), (0.9, 2.0, 0.4), (1.5, 4.0, 0.1),
             (0.7, 2.0, 0.2), (0.6, 2.0, 0.9), (0.5, 4.0, 0.3)],
    "sit":  [(0.15, 0.3, 0.05), (0.1, 0.3, 0.6), (0.2, 0.5, 0.0),
             (0.05, 0.3, 0.1), (0.08, 0.3, 0.2), (0.05, 0.5, 0.7)],
    "wave": [(0.5, 1.0, 0.0), (1.8, 1.2, 0.3), (0.4, 1.0, 0.8),
             (1.1, 1.2, 0.0), (1.4, 1.2, 0.5), (0.3, 1.0, 0.2)],
}
NOISE = {"walk": 0.25, "sit": 0.05, "wave": 0.2}


def main():
    os.makedirs(OUT, exist_ok=True)
    manifest = [
        "# bundled demo dataset; regenerate with tools/gen_demo_data.py",
        "rate_hz: 50",
    ]
    for name in CLASSES:
        manifest.append("class: " + name)
    for label, name in enumerate(CLASSES):
        for s in range(6):
            rng = Lcg(1000 * label + s + 1)
            fname = "%s_%02d.csv" % (name, s)
            with open(os.path.join(OUT, fname), "w") as f:
                f.write(",".join(CHANNELS) + "\n")
                phase = rng.uniform() * math.pi
                for t in range(T):
                    row = []
                    for (amp, freq, off) in PARAMS[name]:
                        v = amp * math.sin(2 * math.pi * freq * t / RATE + phase + off)
                        v += NOISE[name] * rng.uniform()
                        row.append("%.6f" % v)
                    f.write(",".join(row) + "\n")
            manifest.append("%s,%d,s%d" % (fname, label, s % 3 + 1))
    with open(os.path.join(OUT, "manifest.txt"), "w") as f:
        f.write("\n".join(manifest) + "\n")
    print("wrote %d files to %s" % (len(CLASSES) * 6 + 1, OUT))


if __name__ == "__main__":
    main()
