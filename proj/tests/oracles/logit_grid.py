"""Brute-force grid maximizer for the n=20 two-column logit instance."""
import numpy as np

rng = np.random.default_rng(20240607)
X = np.round(rng.uniform(-1, 1, size=(20, 2)), 3)
eta = X @ np.array([0.8, -1.2])
y = (rng.uniform(size=20) < 1 / (1 + np.exp(-eta))).astype(int)

grid = np.arange(-6, 6 + 1e-9, 1e-3)
best = (-np.inf, None)
# separable in chunks over b1 to bound memory
for b1 in grid:
    e = X[:, 0:1] * b1 + X[:, 1:2] * grid[None, :]
    v = (y[:, None] * e - np.logaddexp(0, e)).sum(axis=0)
    k = v.argmax()
    if v[k] > best[0]:
        best = (v[k], (b1, grid[k]))
print("X =", X.tolist())
print("y =", y.tolist())
print("grid argmax =", best[1], "loglik =", best[0])
