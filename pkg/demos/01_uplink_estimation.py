# %% [markdown]
# # Uplink training and the MMSE channel estimate
#
# Each coherence interval starts with orthogonal uplink pilots. The BS forms
# the MMSE estimate `H_hat` of the M x K channel; estimate and error are
# independent, with per-entry variances `r/(r+1)` and `1/(r+1)` where
# `r = tau_u * p_u`.

# %%
import numpy as np

from bftmimo import SystemParams, draw_channel, uplink_estimate
from bftmimo.channel import check_estimate_independence
from bftmimo.linalg import RngStream

params = SystemParams(M=200, K=5, T=200, tau_u=5, tau_d=5, p_u=1.0, p_d=100.0)
gen = RngStream(master_seed=1, stream_index=0).generator()

H = draw_channel(gen, params)
pair = uplink_estimate(gen, H, params)

# %%
print(f"per-entry var of H_hat: {np.mean(np.abs(pair.H_hat) ** 2):.4f}  (theory {params.est_var:.4f})")
print(f"per-entry var of error: {np.mean(np.abs(pair.error) ** 2):.4f}  (theory {params.err_var:.4f})")

# %% [markdown]
# With 1000 entries the correlation between estimate and error is not
# distinguishable from zero.

# %%
report = check_estimate_independence(pair.H_hat, pair.error, min_samples=100)
print(f"E{{h_hat conj(e)}} = {report.correlation:.4f} +/- {report.std_error:.4f}")

# %% [markdown]
# Raising the uplink power drives the estimate onto the true channel.

# %%
for p_u in (0.1, 1.0, 10.0, 1e4):
    p = SystemParams(M=200, K=5, T=200, tau_u=5, tau_d=5, p_u=p_u, p_d=100.0)
    g = RngStream(1, 0).generator()
    Hp = draw_channel(g, p)
    est = uplink_estimate(g, Hp, p)
    print(f"p_u={p_u:>8g}: mean |error|^2 = {np.mean(np.abs(est.error) ** 2):.5f}")
