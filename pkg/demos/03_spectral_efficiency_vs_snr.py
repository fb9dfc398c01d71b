# %% [markdown]
# # Spectral efficiency against downlink SNR
#
# Beamforming training (BFT) spends `tau_d = K` symbols on precoded downlink
# pilots; the baseline spends nothing and detects with `E{a_kk}` instead.
# K = 5 users, T = 200, M in {10, 50}. The curves are emitted as CSV by
# `bftmimo figure fig3`; here we plot them.

# %%
from bftmimo.harness import run_figure

# 2000 trials keeps the demo quick; the CLI default is 10 000.
points = run_figure("fig3", n_trials=2000)

curves = {}
for pt in points:
    curves.setdefault(pt.mode, []).append((pt.axis_value, pt.spectral_efficiency))

# %%
for mode, xy in sorted(curves.items()):
    print(f"{mode:>18}: " + " ".join(f"{y:6.2f}" for _, y in xy))

# %%
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for mode, xy in sorted(curves.items()):
        x, y = zip(*xy)
        ax.plot(x, y, "--" if mode.startswith("BASELINE") else "-", label=mode)
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("spectral efficiency (bits/s/Hz)")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig("se_vs_snr.png", dpi=120)
