# %% [markdown]
# # Effective gains under MRT and ZF
#
# User k sees `a_ki = h_k^T w_i`. The closed-form mean and variance of these
# gains set the MMSE estimator used after beamforming training. Here the
# closed forms are compared against 20 000 simulated coherence intervals.

# %%
import numpy as np

from bftmimo import SystemParams, empirical_moments, moments_mrt, moments_zf
from bftmimo.simulation import simulate_trials

params = SystemParams(M=50, K=5, T=200, tau_u=5, tau_d=5, p_u=1.0, p_d=100.0)
batches = simulate_trials(["MRT", "ZF"], params, n_trials=20_000, master_seed=1)

# %%
for kind, oracle in (("MRT", moments_mrt(params)), ("ZF", moments_zf(params))):
    b = batches[kind]
    diag = empirical_moments(b.a_true[:, 0, 0])
    off = empirical_moments(b.a_true[:, 0, 1])
    err = empirical_moments(np.abs(b.eps[:, 0, 0]) ** 2)
    print(kind)
    print(f"  E[a_kk]     {diag.mean.real:8.5f} +/- {diag.mean_se:.5f}   oracle {oracle.mean_diag:.5f}")
    print(f"  Var(a_kk)   {diag.variance:8.5f} +/- {diag.variance_se:.5f}   oracle {oracle.var_:.5f}")
    print(f"  Var(a_ki)   {off.variance:8.5f} +/- {off.variance_se:.5f}   oracle {oracle.var_:.5f}")
    print(f"  E|eps|^2    {err.mean:8.6f} +/- {err.mean_se:.6f}  oracle {oracle.eps_var:.6f}")

# %% [markdown]
# ZF gains fluctuate far less than MRT gains (1/30 against 1/5 here), which is
# why downlink training helps MRT users more.
#
# The full battery of checks is available as one call; the CLI equivalent is
# `bftmimo validate`.

# %%
from bftmimo import run_validate

report = run_validate(params, n_trials=20_000, master_seed=1)
print(f"{sum(c.passed for c in report.checks)}/{len(report.checks)} checks pass")
