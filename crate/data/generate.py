#!/usr/bin/env python3
"""Regenerate the synthetic benchmark fixtures in this directory.

Each dataset mimics the shape of a well-known UCI benchmark (feature
count, class balance, missing-value pattern) and is calibrated so that a
10x10-fold Gaussian naive Bayes baseline lands on a fixed target
accuracy. Everything is seeded; rerunning the script rewrites identical
files.
"""

import csv
import math
import os
import numpy as np
from sklearn.model_selection import StratifiedKFold
from sklearn.naive_bayes import GaussianNB

HERE = os.path.dirname(os.path.abspath(__file__))


def nb_cv(x, y, reps=10, folds=10):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y)
    accs = []
    for r in range(reps):
        skf = StratifiedKFold(n_splits=folds, shuffle=True, random_state=r)
        for tr, te in skf.split(x, y):
            model = GaussianNB().fit(x[tr], y[tr])
            accs.append(model.score(x[te], y[te]))
    return float(np.mean(accs))


def calibrate(build, target, lo=0.05, hi=3.0, tol=0.002, iters=18):
    """Bisect a global separation multiplier until NB lands on target."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        x, y = build(mid)
        acc = nb_cv(x, y)
        if abs(acc - target) < tol:
            return mid, acc
        if acc < target:
            lo = mid
        else:
            hi = mid
    x, y = build(0.5 * (lo + hi))
    return 0.5 * (lo + hi), nb_cv(x, y)


def write_csv(name, header, rows):
    path = os.path.join(HERE, name)
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


# ---------------------------------------------------------------- wisconsin
# 9 integer-coded cytology features in 1..10; 699 rows of which 16 carry a
# missing bare-nuclei cell (14 benign, 2 malignant), leaving 683 = 444+239.

def wisconsin():
    rng = np.random.default_rng(101)
    nb_, nm = 458, 241
    z = rng.standard_normal((nb_ + nm, 9))
    heavy = rng.exponential(1.0, size=(nb_ + nm, 2))  # weak tail features
    miss_b = rng.choice(nb_, size=14, replace=False)
    miss_m = rng.choice(nm, size=2, replace=False) + nb_

    base_b = np.array([2.9, 1.3, 1.4, 1.3, 2.1, 1.3, 2.1, 1.2, 1.1])
    sd_b = np.array([1.6, 0.9, 1.0, 0.9, 0.9, 1.2, 1.1, 0.9, 0.5])
    delta = np.array([4.2, 5.3, 5.2, 4.2, 3.2, 6.3, 3.8, 4.6, 1.4])
    # near-equal class spreads keep the boundary close to linear, so a
    # margin classifier is not handicapped against the Gaussian model
    sd_m = sd_b * 1.3

    def build(sep):
        xb = base_b + sd_b * z[:nb_]
        xm = base_b + sep * delta + sd_m * z[nb_:]
        x = np.vstack([xb, xm])
        # two weakest columns become near-noise with a shared heavy tail
        x[:, 7] = 1.0 + 1.3 * heavy[:, 0] + 0.25 * sep * delta[7] * (np.arange(len(x)) >= nb_)
        x[:, 8] = 1.0 + 0.8 * heavy[:, 1]
        x = np.clip(np.rint(x), 1, 10)
        y = np.array([0] * nb_ + [1] * nm)
        return x, y

    sep, acc = calibrate(build, 0.966)
    x, y = build(sep)
    print(f"wisconsin sep={sep:.4f} nb={acc:.4f}")
    rows = []
    missing = set(miss_b) | set(miss_m)
    for i in range(len(x)):
        vals = [int(v) for v in x[i]]
        if i in missing:
            vals[5] = "?"
        rows.append(vals + ["benign" if y[i] == 0 else "malignant"])
    order = rng.permutation(len(rows))
    rows = [rows[i] for i in order]
    write_csv(
        "wisconsin.csv",
        ["clump", "size_unif", "shape_unif", "adhesion", "epi_size",
         "bare_nuclei", "chromatin", "nucleoli", "mitoses", "Class"],
        rows,
    )


# --------------------------------------------------------------------- pima
# 8 features, 768 rows, 500 negative / 268 positive. Several columns are
# zero-inflated or skewed, which a plain Gaussian model handles poorly.

def pima():
    rng = np.random.default_rng(202)
    n0, n1 = 500, 268
    n = n0 + n1
    z = rng.standard_normal((n, 8))
    u = rng.random((n, 8))
    pos = np.array([0] * n0 + [1] * n1)

    def build(sep):
        s = pos * sep
        x = np.empty((n, 8))
        x[:, 0] = np.clip(np.rint(2.9 + 1.35 * s + 3.0 * np.abs(z[:, 0])), 0, 17)
        x[:, 1] = np.rint(109.0 + 31.0 * s + 26.0 * z[:, 1])
        x[:, 2] = np.rint(69.0 + 2.5 * s + 13.0 * z[:, 2])
        skin = 28.0 + 3.0 * s + 10.0 * z[:, 3]
        x[:, 3] = np.where(u[:, 3] < 0.30, 0.0, np.clip(np.rint(skin), 7, 99))
        insulin = np.exp(4.4 + 0.30 * s + 0.72 * z[:, 4])
        x[:, 4] = np.where(u[:, 4] < 0.49, 0.0, np.rint(insulin))
        x[:, 5] = np.round(30.0 + 4.3 * s + 6.3 * z[:, 5], 1)
        x[:, 6] = np.round(np.exp(-1.0 + 0.12 * s + 0.70 * z[:, 6]), 3)
        x[:, 7] = np.clip(np.rint(28.0 + 6.5 * s + 9.0 * np.abs(z[:, 7])), 21, 81)
        x[:, 1] = np.clip(x[:, 1], 44, 199)
        x[:, 2] = np.clip(x[:, 2], 24, 122)
        return x, pos

    sep, acc = calibrate(build, 0.734)
    x, y = build(sep)
    print(f"pima sep={sep:.4f} nb={acc:.4f}")
    rows = []
    for i in range(n):
        r = x[i]
        rows.append([
            int(r[0]), int(r[1]), int(r[2]), int(r[3]), int(r[4]),
            f"{r[5]:.1f}", f"{r[6]:.3f}", int(r[7]),
            "tested_negative" if y[i] == 0 else "tested_positive",
        ])
    rows = [rows[i] for i in rng.permutation(n)]
    write_csv(
        "pima.csv",
        ["preg", "plas", "pres", "skin", "insu", "mass", "pedi", "age", "class"],
        rows,
    )


# --------------------------------------------------------------- newthyroid
# 5 features, 215 rows: 150 normal / 35 hyper / 30 hypo.

def newthyroid():
    rng = np.random.default_rng(303)
    counts = [150, 35, 30]
    n = sum(counts)
    cls = np.repeat([0, 1, 2], counts)
    z = rng.standard_normal((n, 5))

    mu0 = np.array([110.0, 9.2, 1.7, 1.4, 2.5])
    off = np.array([
        [0.0, 0.0, 0.0, 0.0, 0.0],
        [-21.0, 8.0, 2.6, -0.5, -2.4],
        [16.0, -5.2, -0.5, 12.0, 16.0],
    ])
    sd = np.array([
        [12.0, 2.2, 0.45, 0.9, 2.6],
        [12.0, 4.0, 1.4, 0.6, 0.5],
        [18.0, 2.0, 0.5, 11.0, 14.0],
    ])

    def build(sep):
        x = mu0 + sep * off[cls] + sd[cls] * z
        x[:, 0] = np.rint(x[:, 0])
        x[:, 1] = np.round(np.maximum(x[:, 1], 0.2), 1)
        x[:, 2] = np.round(np.maximum(x[:, 2], 0.2), 1)
        x[:, 3] = np.round(np.maximum(x[:, 3], 0.1), 1)
        x[:, 4] = np.round(x[:, 4], 1)
        return x, cls

    sep, acc = calibrate(build, 0.967)
    x, y = build(sep)
    print(f"newthyroid sep={sep:.4f} nb={acc:.4f}")
    names = ["normal", "hyper", "hypo"]
    rows = []
    for i in range(n):
        r = x[i]
        rows.append([int(r[0]), r[1], r[2], r[3], r[4], names[y[i]]])
    rows = [rows[i] for i in rng.permutation(n)]
    write_csv("newthyroid.csv", ["t3_resin", "thyroxin", "t3", "tsh", "tsh_diff", "class"], rows)


# -------------------------------------------------------------------- heart
# 13 mixed features, 270 rows, 150 absent / 120 present.

def heart():
    rng = np.random.default_rng(404)
    n0, n1 = 150, 120
    n = n0 + n1
    pos = np.array([0] * n0 + [1] * n1)
    z = rng.standard_normal((n, 13))
    u = rng.random((n, 13))

    def bern(col, p0, p1, sep):
        p = np.clip(np.where(pos == 0, p0, p0 + sep * (p1 - p0)), 0.02, 0.98)
        return (u[:, col] < p).astype(float)

    def build(sep):
        s = pos * sep
        x = np.empty((n, 13))
        x[:, 0] = np.rint(52.0 + 4.5 * s + 9.0 * z[:, 0])            # age
        x[:, 1] = bern(1, 0.56, 0.83, sep)                            # sex
        x[:, 2] = np.clip(np.rint(2.8 + 0.9 * s + 0.95 * z[:, 2]), 1, 4)  # cp
        x[:, 3] = np.rint(128.0 + 6.0 * s + 16.0 * z[:, 3])           # trestbps
        x[:, 4] = np.rint(245.0 + 11.0 * s + 49.0 * z[:, 4])          # chol
        x[:, 5] = bern(5, 0.14, 0.16, sep)                            # fbs
        x[:, 6] = np.clip(np.rint(0.9 + 0.35 * s + 0.9 * z[:, 6]), 0, 2)  # restecg
        x[:, 7] = np.rint(158.0 - 19.0 * s + 19.0 * z[:, 7])          # thalach
        x[:, 8] = bern(8, 0.14, 0.55, sep)                            # exang
        oldpeak = np.maximum(0.0, 0.55 + 1.05 * s + 0.95 * z[:, 9])
        x[:, 9] = np.round(np.where(u[:, 9] < 0.45 - 0.22 * s, 0.0, oldpeak), 1)
        x[:, 10] = np.clip(np.rint(1.45 + 0.5 * s + 0.6 * z[:, 10]), 1, 3)  # slope
        x[:, 11] = np.clip(np.rint(0.35 + 0.95 * s + 0.85 * z[:, 11]), 0, 3)  # ca
        thal = np.clip(np.rint(3.6 + 1.9 * s + 1.6 * z[:, 12]), 3, 7)
        x[:, 12] = np.where(thal <= 4, 3, np.where(thal <= 6, 6, 7))  # thal
        return x, pos

    sep, acc = calibrate(build, 0.811)
    x, y = build(sep)
    print(f"heart sep={sep:.4f} nb={acc:.4f}")
    rows = []
    for i in range(n):
        r = x[i]
        vals = [int(v) for v in r[:9]] + [f"{r[9]:.1f}"] + [int(v) for v in r[10:]]
        rows.append(vals + ["absent" if y[i] == 0 else "present"])
    rows = [rows[i] for i in rng.permutation(n)]
    write_csv(
        "heart.csv",
        ["age", "sex", "cp", "trestbps", "chol", "fbs", "restecg", "thalach",
         "exang", "oldpeak", "slope", "ca", "thal", "class"],
        rows,
    )


# ------------------------------------------------------------------ saheart
# 9 features with a nominal family-history column, 462 rows, 302/160.

def saheart():
    rng = np.random.default_rng(505)
    n0, n1 = 302, 160
    n = n0 + n1
    pos = np.array([0] * n0 + [1] * n1)
    z = rng.standard_normal((n, 9))
    u = rng.random((n, 9))

    def build(sep):
        s = pos * sep
        x = np.empty((n, 9))
        x[:, 0] = np.rint(133.0 + 7.0 * s + 19.0 * z[:, 0])           # sbp
        tobacco = np.exp(0.3 + 0.75 * s + 1.1 * z[:, 1])
        x[:, 1] = np.round(np.where(u[:, 1] < 0.32 - 0.12 * s, 0.0, tobacco), 2)
        x[:, 2] = np.round(4.3 + 1.1 * s + 1.9 * np.abs(z[:, 2]), 2)  # ldl
        x[:, 3] = np.round(24.0 + 4.0 * s + 7.3 * z[:, 3], 2)         # adiposity
        p = np.clip(0.35 + 0.26 * s, 0.02, 0.98)
        x[:, 4] = (u[:, 4] < p).astype(float)                         # famhist
        x[:, 5] = np.rint(53.0 + 1.3 * s + 9.7 * z[:, 5])             # typea
        x[:, 6] = np.round(25.8 + 0.9 * s + 4.1 * z[:, 6], 2)         # obesity
        alcohol = np.exp(1.8 + 0.1 * s + 1.3 * z[:, 7])
        x[:, 7] = np.round(np.where(u[:, 7] < 0.35, 0.0, alcohol), 2)
        x[:, 8] = np.clip(np.rint(39.0 + 10.5 * s + 13.5 * z[:, 8]), 15, 64)  # age
        return x, pos

    sep, acc = calibrate(build, 0.671)
    x, y = build(sep)
    print(f"saheart sep={sep:.4f} nb={acc:.4f}")
    rows = []
    for i in range(n):
        r = x[i]
        rows.append([
            int(r[0]), f"{r[1]:.2f}", f"{r[2]:.2f}", f"{r[3]:.2f}",
            "Present" if r[4] > 0.5 else "Absent",
            int(r[5]), f"{r[6]:.2f}", f"{r[7]:.2f}", int(r[8]),
            str(int(y[i])),
        ])
    rows = [rows[i] for i in rng.permutation(n)]
    write_csv(
        "saheart.csv",
        ["sbp", "tobacco", "ldl", "adiposity", "famhist", "typea",
         "obesity", "alcohol", "age", "chd"],
        rows,
    )


if __name__ == "__main__":
    wisconsin()
    pima()
    newthyroid()
    heart()
    saheart()
