"""The secular function behind the quadric projection, drawn.

Builds a small indefinite constraint, expands a random vector in its
eigenbasis, and plots S(lam) with its poles and the root the solver
returns. The root between the innermost pole pair is the one of smallest
magnitude, which is what makes the projection minimum-norm.

Needs matplotlib (install the demo extra).
"""

import matplotlib.pyplot as plt
import numpy as np

from cdbeam import build_secular, eval_secular, solve_secular

rng = np.random.default_rng(3)

# A mixed-sign spectrum and a dense expansion vector.
e = np.array([-2.4, -0.9, 0.6, 1.8])
u = rng.standard_normal(4) + 1j * rng.standard_normal(4)

problem = build_secular(u, e)
root = solve_secular(problem)
print(f"poles: {problem.poles}")
print(f"bracket: ({problem.bracket_low:.4f}, {problem.bracket_high:.4f})")
print(f"root: {root.lam:.12f}  (residual {root.residual:.2e}, {root.iterations} iterations)")

# Sample S on a grid that spans one pole beyond the bracket on each side,
# masking the divergences so the branches stay readable.
poles = problem.poles
lo = poles.min() * 1.4
hi = poles.max() * 1.4
grid = np.linspace(lo, hi, 4001)
values = np.full(grid.size, np.nan)
for i, lam in enumerate(grid):
    if np.abs(lam - poles).min() > 1e-3:
        values[i] = eval_secular(problem, lam)[0]
values = np.clip(values, -400.0, 400.0)

plt.figure(figsize=(8, 5))
plt.plot(grid, values, linewidth=1.2)
plt.axhline(0.0, color="black", linewidth=0.8)
for b in poles:
    plt.axvline(b, color="gray", linestyle="--", linewidth=0.8)
plt.axvspan(problem.bracket_low, problem.bracket_high, color="tab:orange", alpha=0.15,
            label="bracket between innermost poles")
plt.plot([root.lam], [0.0], "o", color="tab:red", label="returned root")
plt.xlabel("lam")
plt.ylabel("S(lam)  (clipped)")
plt.legend()
plt.grid(True, linestyle="--", alpha=0.4)

plt.savefig("secular_function.png", dpi=150)
plt.show()
