#!/usr/bin/env python3
"""Regenerate the synthetic spectra fixture in fixtures/spectra/.

Ten mass-spectrum-like curves on irregular grids over [700, 12000]:
five per class, the classes differing in the location of the dominant
peak (near 7600 vs near 9100). Baseline noise stays below intensity 5 so
threshold denoising removes it; two smaller peaks are shared by both
classes and one peak sits outside [7000, 9500] to exercise domain
restriction. Deterministic: rerunning reproduces the same files.
"""

import numpy as np

OUT = "spectra"
N_PER_CLASS = 5


def gaussian(t, center, width, amp):
    return amp * np.exp(-((t - center) / width) ** 2)


def main():
    rng = np.random.default_rng(20250809)
    labels = []
    for idx in range(2 * N_PER_CLASS):
        label = 0 if idx < N_PER_CLASS else 1
        name = f"s{idx + 1:02d}"
        n = int(rng.integers(2800, 3600))
        t = np.sort(rng.uniform(700.0, 12000.0, size=n))
        t = np.unique(t)

        v = np.abs(rng.normal(0.0, 1.3, size=t.size))  # sub-threshold baseline
        main_center = (7600.0 if label == 0 else 9100.0) + rng.uniform(-6.0, 6.0)
        v += gaussian(t, main_center, rng.uniform(32.0, 40.0), rng.uniform(60.0, 100.0))
        # shared secondary peaks, inside and outside the restriction window
        v += gaussian(t, 7150.0 + rng.uniform(-4, 4), 30.0, rng.uniform(25.0, 40.0))
        v += gaussian(t, 8400.0 + rng.uniform(-5, 5), 35.0, rng.uniform(18.0, 30.0))
        v += gaussian(t, 10500.0 + rng.uniform(-8, 8), 50.0, rng.uniform(30.0, 60.0))
        v += gaussian(t, 1200.0 + rng.uniform(-10, 10), 60.0, rng.uniform(20.0, 50.0))
        # one faint spectrum-specific peak inside the window
        v += gaussian(t, rng.uniform(7000.0, 9500.0), 15.0, rng.uniform(5.0, 11.0))

        with open(f"{OUT}/{name}.csv", "w") as fh:
            fh.write("t,value\n")
            for ti, vi in zip(t, v):
                fh.write(f"{ti:.4f},{vi:.4f}\n")
        labels.append((name, label))

    with open(f"{OUT}/labels.csv", "w") as fh:
        fh.write("id,label\n")
        for name, label in labels:
            fh.write(f"{name},{label}\n")
    print(f"wrote {len(labels)} spectra")


if __name__ == "__main__":
    main()
