"""Frozen high-precision reference values for the distribution CDFs.

Writes crates/core/tests/data/cdf_oracle.csv with columns
dist,x,df1,df2,cdf evaluated with mpmath at 50 decimal digits.
"""
import csv
import random

import mpmath as mp

mp.mp.dps = 50
rng = random.Random(20251019)
rows = []


def normal(z):
    return mp.ncdf(z)


def student_t(t, df):
    t, df = mp.mpf(t), mp.mpf(df)
    x = df / (df + t * t)
    tail = mp.betainc(df / 2, mp.mpf(1) / 2, 0, x, regularized=True) / 2
    return 1 - tail if t > 0 else tail


def chisq(x, df):
    return mp.gammainc(mp.mpf(df) / 2, 0, mp.mpf(x) / 2, regularized=True)


def fdist(x, d1, d2):
    x, d1, d2 = mp.mpf(x), mp.mpf(d1), mp.mpf(d2)
    return mp.betainc(d1 / 2, d2 / 2, 0, d1 * x / (d1 * x + d2), regularized=True)


for _ in range(1000):
    z = rng.uniform(-9.0, 9.0)
    rows.append(("normal", z, 0.0, 0.0, normal(z)))
for _ in range(1000):
    t = rng.uniform(-25.0, 25.0)
    df = rng.choice([rng.uniform(0.5, 5.0), rng.uniform(5.0, 300.0)])
    rows.append(("t", t, df, 0.0, student_t(t, df)))
for _ in range(1000):
    df = rng.choice([rng.uniform(0.5, 5.0), rng.uniform(5.0, 150.0)])
    x = rng.uniform(0.0, 3.0 * df + 30.0)
    rows.append(("chisq", x, df, 0.0, chisq(x, df)))
for _ in range(1000):
    d1 = rng.choice([rng.uniform(0.5, 5.0), rng.uniform(5.0, 200.0)])
    d2 = rng.choice([rng.uniform(0.5, 5.0), rng.uniform(5.0, 300.0)])
    x = rng.uniform(0.0, 12.0)
    rows.append(("f", x, d1, d2, fdist(x, d1, d2)))

with open("crates/core/tests/data/cdf_oracle.csv", "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["dist", "x", "df1", "df2", "cdf"])
    for dist, x, d1, d2, p in rows:
        w.writerow([dist, repr(float(x)), repr(float(d1)), repr(float(d2)), mp.nstr(p, 20)])
