"""Walk the latent space: interpolate between two training routes and
sweep a single latent dimension.

Because every route is a point in R^16, a straight line between two
encoded routes decodes into a sequence of boards that morph from one into
the other. This is the machinery behind the web UI's sliders.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import numpy as np

import routegen as rg
from _common import ensure_demo_model

model, corpus = ensure_demo_model()

a, b = corpus[0], corpus[1]
xa = rg.problem_to_vector(a).astype(np.float64)
xb = rg.problem_to_vector(b).astype(np.float64)
za, _ = rg.encode(model, xa)
zb, _ = rg.encode(model, xb)

print(f"interpolating {a.name} -> {b.name}\n")
steps = 5
for i in range(steps):
    t = i / (steps - 1)
    z = (1.0 - t) * za + t * zb
    probs = rg.decode(model, z)
    k = rg.choose_k(probs)
    bits = rg.select_holds(probs, k)
    problem = rg.vector_to_problem(bits, name=f"t={t:.2f}")
    holds = " ".join(c.label for c in problem.coords)
    report = rg.validate_route(problem)
    print(f"t={t:.2f}  k={k:2d}  valid={report.valid!s:5}  {holds}")

print("\nsweeping latent dimension 0 from -3 to +3 (others at the prior mean):")
for v in (-3.0, -1.5, 0.0, 1.5, 3.0):
    z = np.zeros(16)
    z[0] = v
    probs = rg.decode(model, z)
    bits = rg.select_holds(probs, rg.choose_k(probs))
    problem = rg.vector_to_problem(bits, name="sweep")
    holds = " ".join(c.label for c in problem.coords)
    print(f"z0={v:+.1f}  {holds}")
