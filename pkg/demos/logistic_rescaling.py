"""Fixed-scale against adaptively rescaled MCP for logistic regression.

Run with ``python demos/logistic_rescaling.py``.
"""

# %%
import numpy as np

from ncvpath import NonconvexUpdateError, ScaleMode, fit_path
from ncvpath.simgen import FourSpike, SimSpec, generate

data, beta = generate(SimSpec(n=300, p=10, signal=FourSpike(1.0), family="binomial", seed=1))

# %%
# IRLS weights never exceed 1/4, so v_j <= 1/4 for every standardized
# column. A fixed-scale MCP update with gamma = 3 has no unique minimizer.
try:
    fit_path(data, "mcp", 3.0, ScaleMode.FIXED)
except NonconvexUpdateError as exc:
    print("fixed scale:", exc)

# %%
# Rescaling each update by v_j keeps gamma on the same footing as in the
# linear model.
path = fit_path(data, "mcp", 3.0, ScaleMode.ADAPTIVE)
print("smallest update denominator:", np.min(path.min_denominator))
k = len(path) // 2
print("lambda =", round(path.lambdas[k], 4))
print("coefficients:", np.round(path.betas[k], 3))
print("truth:       ", beta)
