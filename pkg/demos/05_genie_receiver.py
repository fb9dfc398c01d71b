# %% [markdown]
# # How much does per-element estimation lose?
#
# Users estimate each gain `a_ki` separately. A genie receiver that knows the
# gains exactly bounds what a better (joint) estimator could recover. Both
# schemes pay the same training overhead.

# %%
from bftmimo import SystemParams, monte_carlo_rates, se_bft

for snr_db in (-10, 0, 10, 20):
    params = SystemParams.paper_defaults(M=50, K=5, T=200, p_d=10 ** (snr_db / 10))
    res = monte_carlo_rates(["BFT_MRT", "GENIE_MRT", "BFT_ZF", "GENIE_ZF"], params,
                            n_trials=5000, master_seed=1)
    se = {m.value: se_bft(r, params).value for m, r in res.items()}
    for kind in ("MRT", "ZF"):
        bft, genie = se[f"BFT_{kind}"], se[f"GENIE_{kind}"]
        print(f"{snr_db:>4} dB {kind:>3}: BFT {bft:6.2f}  genie {genie:6.2f}  "
              f"loss {100 * (genie - bft) / genie:4.1f}%")
