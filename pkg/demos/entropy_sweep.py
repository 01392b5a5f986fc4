"""CSV of (system, n, log N(n) / n) for plotting the convergence of pattern-count entropy."""
import csv
import sys

import mpmath

from meanlab.entropy import topological_entropy
from meanlab.zoo import ZOO, system

w = csv.writer(sys.stdout)
w.writerow(["system", "n", "count", "rate", "claim"])
for name in ZOO:
    est = topological_entropy(system(name), n_max=24)
    for n, _, count, rate in est.rows:
        w.writerow([name, n, count, mpmath.nstr(rate, 12), est.claim])
