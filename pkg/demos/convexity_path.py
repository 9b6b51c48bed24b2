"""Walk down an MCP path and watch where local convexity is lost.

Run with ``python demos/convexity_path.py``.
"""

# %%
import numpy as np

from ncvpath import fit_path, standardize
from ncvpath.convexity import diagnose_path
from ncvpath.simgen import FourSpike, SimSpec, generate

data, beta = generate(SimSpec(n=20, p=50, signal=FourSpike(1.0), seed=3))
design = standardize(data)

# %%
# With p > n the full Gram matrix is singular, so convexity can only hold
# locally, on the small augmented active sets near the top of the path.
path = fit_path(design, "mcp", gamma=3.0)
report = diagnose_path(path, design)
print("lambda* =", report.lambda_star)

# %%
for row in list(report.rows())[::10]:
    print(f"lambda={row['lambda']:.4f}  |U|={row['augmented_size']:2d}  "
          f"c*={row['c_star']:+.3f}  convex={row['locally_convex']}")

# %%
# Restart at a point below lambda* from a few random coefficient vectors.
from ncvpath.cd_linear import FitConfig, fit_linear
from ncvpath.design import CoefficientVector, Scale
from ncvpath.penalties import PenaltySpec

rng = np.random.default_rng(0)
k = len(path) - 1
spec = PenaltySpec("mcp", path.lambdas[k], 3.0)
sols = [fit_linear(design, spec, CoefficientVector(0.0, rng.standard_normal(50), Scale.STANDARDIZED),
                   FitConfig(tol=1e-10, max_iter=100000)).coefs.betas for _ in range(5)]
spread = max(np.abs(a - b).max() for a in sols for b in sols)
print(f"multi-start spread at lambda={path.lambdas[k]:.4f}: {spread:.3f}")
