# %% [markdown]
# # How sample kurtosis grows with n for stable data
#
# For a symmetric stable law with alpha < 2 the fourth moment does not
# exist, so the sample excess kurtosis g2 has nothing to converge to.  It
# keeps growing with the sample size, and roughly linearly:
# E(g2) is close to n * (1 - alpha/2).  This script shows that with small
# replicate counts so it runs in a few seconds.  The acceptance suite uses
# m = 5000.

# %%
import numpy as np

from stablekurt import (
    ExperimentConfig,
    SeedSpec,
    StableParams,
    compute_stats,
    growth_curve,
    run_experiment,
    sample_symmetric_stable,
)

SEED = 7

# %% [markdown]
# ## One sample, one curve
#
# The curve is g2 of the first k observations for k = 50, 100, ..., 500.
# A single Cauchy path (alpha = 1) is very jumpy: a big observation lifts
# every later prefix at once.

# %%
x = sample_symmetric_stable(StableParams(alpha=1.0), 500, SeedSpec(SEED, 1))
curve = growth_curve(x, range(50, 501, 50))
for k, g in zip(curve.checkpoints, curve.g2_values):
    print(f"{k:4d}  g2 = {g:8.2f}   g2/k = {g / k:.3f}")

# %% [markdown]
# b2 = g2 + 3 can never exceed n, whatever the data.  So g2/n is a bounded
# quantity even though g2 is not:

# %%
s = compute_stats(x)
print(f"b2 = {s.b2:.2f}, n = {s.n}, c = b2/n = {s.c:.3f}")

# %% [markdown]
# ## Averaged curves
#
# Averaging over replicates smooths the curves.  The fitted slopes line up
# with 1 - alpha/2.

# %%
rep = run_experiment(ExperimentConfig("growth-slopes", alphas=(1.0, 1.5, 2.0), m=400, master_seed=SEED))
for c in rep.summary["curves"]:
    print(f"alpha {c['alpha']:.1f}: slope {c['slope_fit']['slope']:.4f} "
          f"(1 - alpha/2 = {c['expected_slope']:.4f})")

# %% [markdown]
# ## Slope against alpha
#
# Sweeping alpha over 1.0..2.0 and regressing the mean slope on 2 - alpha
# through the origin should give a coefficient near one half.

# %%
rep = run_experiment(ExperimentConfig("slope-vs-alpha", m=200, master_seed=SEED))
for p in rep.summary["per_alpha"]:
    print(f"alpha {p['alpha']:.1f}: mean slope {p['mean_slope']:.3f} +/- {p['se']:.3f}")
print("through-origin coefficient:", round(rep.summary["through_origin_coefficient"], 4))

# %% [markdown]
# ## Random alpha and random n
#
# Each replicate draws alpha from U(1, 2) and n from {200, ..., 1500}.
# Regressing g2 on n and n*alpha without an intercept recovers
# g2 = n - n*alpha/2, give or take the Monte Carlo noise.

# %%
rep = run_experiment(ExperimentConfig("scatter", m=500, master_seed=SEED))
b_n, b_na = rep.summary["coefficients"]
print(f"g2 ~ {b_n:.3f} * n {b_na:+.3f} * n*alpha")

# %% [markdown]
# The variance of b2/n shrinks to zero at the Gaussian end and is large for
# heavy tails:

# %%
rep = run_experiment(ExperimentConfig("variance-curve", alphas=(1.0, 1.4, 1.8, 2.0), m=300, master_seed=SEED))
for p in rep.summary["per_param"]:
    print(f"alpha {p['alpha']:.1f}: var(b2)/n^2 = {p['var_b2_over_n2']:.2e}")
