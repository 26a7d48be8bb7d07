"""Reference statistics for the normality and variance test fixtures.

Writes crates/core/tests/data/stats_fixtures.json. Shapiro-Wilk and Levene
(mean-centred) values come from scipy; Lilliefors D and table p-values
from statsmodels, plus a direct Monte Carlo p (`p_mc`, 200k null samples).
"""
import json

import numpy as np
from scipy import stats
from statsmodels.stats.diagnostic import lilliefors

MC_SIMS = 200_000
mc_rng = np.random.default_rng(2024)


def ks_stat(x):
    x = np.sort(x, axis=-1)
    n = x.shape[-1]
    z = (x - x.mean(-1, keepdims=True)) / x.std(-1, ddof=1, keepdims=True)
    c = stats.norm.cdf(z)
    i = np.arange(1, n + 1)
    return np.maximum((i / n - c).max(-1), (c - (i - 1) / n).max(-1))


def lilliefors_mc(d, n):
    hits = 0
    for _ in range(MC_SIMS // 10_000):
        hits += int((ks_stat(mc_rng.standard_normal((10_000, n))) >= d).sum())
    return hits / MC_SIMS

rng = np.random.default_rng(7)
out = {"shapiro": [], "lilliefors": [], "levene": []}

samples = {}
n = 50
samples["normal_quantiles_50"] = stats.norm.ppf((np.arange(1, n + 1) - 0.375) / (n + 0.25))
samples["outlier_50"] = np.append(rng.standard_normal(49), 100.0)
for k in [3, 4, 5, 6, 8, 11, 12, 20, 58, 60, 150, 400]:
    samples[f"normal_{k}"] = rng.normal(3.0, 2.0, k)
for k in [10, 30, 60, 120]:
    samples[f"exponential_{k}"] = rng.exponential(1.0, k)
samples["uniform_25"] = rng.uniform(-1, 1, 25)

for name, x in samples.items():
    w, p = stats.shapiro(x)
    out["shapiro"].append({"name": name, "x": x.tolist(), "w": float(w), "p": float(p)})
    if len(x) >= 4:
        d, lp = lilliefors(x, dist="norm", pvalmethod="table")
        out["lilliefors"].append({"name": name, "x": x.tolist(), "d": float(d), "p": float(lp),
                                   "p_mc": lilliefors_mc(d, len(x))})

a = rng.standard_normal(30)
b = 5.0 * rng.standard_normal(30)
pairs = {
    "scaled_by_5": (a, b),
    "similar": (rng.normal(0, 1, 40), rng.normal(0.5, 1.1, 35)),
    "unequal_n": (rng.normal(0, 1, 58), rng.normal(0, 1.6, 60)),
}
for name, (x, y) in pairs.items():
    w, p = stats.levene(x, y, center="mean")
    out["levene"].append({"name": name, "a": x.tolist(), "b": y.tolist(), "w": float(w), "p": float(p)})

with open("crates/core/tests/data/stats_fixtures.json", "w") as fh:
    json.dump(out, fh, indent=1)
