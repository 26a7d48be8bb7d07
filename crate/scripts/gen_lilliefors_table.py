"""Monte Carlo critical values of the Lilliefors (normal, estimated
mean and sd) Kolmogorov-Smirnov statistic.

Prints a Rust table body for crates/core/src/stats_uni/lilliefors_table.rs.
"""
import numpy as np
from scipy.special import ndtr

SIZES = list(range(4, 21)) + [25, 30, 35, 40, 45, 50, 60, 70, 80, 90, 100]
UPPER_TAIL = [0.99, 0.95, 0.90, 0.80, 0.70, 0.60, 0.50, 0.40, 0.30, 0.20,
              0.15, 0.10, 0.05, 0.025, 0.01, 0.005, 0.001]
SIMS = 400_000
CHUNK = 50_000

rng = np.random.default_rng(19671)


def dstat(x):
    n = x.shape[1]
    x = np.sort(x, axis=1)
    z = (x - x.mean(axis=1, keepdims=True)) / x.std(axis=1, ddof=1, keepdims=True)
    cdf = ndtr(z)
    i = np.arange(1, n + 1)
    dplus = (i / n - cdf).max(axis=1)
    dminus = (cdf - (i - 1) / n).max(axis=1)
    return np.maximum(dplus, dminus)


print("pub(crate) const UPPER_TAIL: [f64; %d] = [%s];" % (
    len(UPPER_TAIL), ", ".join(repr(p) for p in UPPER_TAIL)))
print()
print("pub(crate) const CRITICAL: [(usize, [f64; %d]); %d] = [" % (len(UPPER_TAIL), len(SIZES)))
for n in SIZES:
    d = np.concatenate([dstat(rng.standard_normal((CHUNK, n))) for _ in range(SIMS // CHUNK)])
    q = np.quantile(d, [1.0 - p for p in UPPER_TAIL])
    print("    (%d, [%s])," % (n, ", ".join("%.5f" % v for v in q)))
print("];")
