# %% [markdown]
# # Which components does a mismatched model lock onto?
#
# Three integers summarise a signal/inference pair: how many true spikes
# clear the spectral edge (d), how many of those the inferred model picks up
# (c), and how far the inferred model reaches into pure noise (e).

# %%
from spikedmse import InferenceModel, SignalModel, rank_profile

signal = SignalModel([1, 1, 1], snr_true=4)
for betas in ([1], [1, 1, 1], [1, 1, 1, 1], [1, 1, 1, 1, 1]):
    p = rank_profile(signal, InferenceModel(betas, snr_inferred=4))
    print(f"k={len(betas)}  d={p.d} c={p.c} e={p.e}  {p.regime.value}")

# %% [markdown]
# Dropping the true SNR below one hides every spike in the bulk.  A confident
# inferred model still reaches into the noise, so e stays at k.

# %%
p = rank_profile(SignalModel([1, 1, 1], 0.5), InferenceModel([1, 1, 1], 4))
print(p)

# %%
# weak inferred powers: spikes are visible but never locked onto
p = rank_profile(SignalModel([2, 1.5], 2), InferenceModel([0.3, 0.2], 2))
print(f"d={p.d} c={p.c} e={p.e}")
