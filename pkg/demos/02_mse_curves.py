# %% [markdown]
# # Matrix-MSE along a matched SNR sweep
#
# Both SNRs move together.  Under-specifying the rank leaves the missed
# components as an irreducible floor; over-specifying it adds an overfitting
# term that decays only like 1/sqrt(lambda).

# %%
import numpy as np

from spikedmse import InferenceModel, SignalModel, mse_sph

lams = np.geomspace(0.1, 1e4, 9)
header = "lambda    " + "".join(f"k={k:<9d}" for k in range(1, 6))
print(header)
for lam in lams:
    row = [mse_sph(SignalModel([1, 1, 1], lam), InferenceModel([1] * k, lam)).total for k in range(1, 6)]
    print(f"{lam:<10.3g}" + "".join(f"{t:<11.5f}" for t in row))

# %% [markdown]
# The k=4 and k=5 columns are still about 2/sqrt(lambda) above their limits
# of 1 and 2 at lambda = 1e4.

# %%
lam = 1e4
for k, limit in ((4, 1.0), (5, 2.0)):
    res = mse_sph(SignalModel([1, 1, 1], lam), InferenceModel([1] * k, lam))
    print(k, res.total - limit, res.overfitting_term, (k - 3) * (1 - 1 / np.sqrt(lam)) ** 2)

# %% [markdown]
# ## Overconfident powers
# With alpha = (2, 2) but beta = (3, 3) the error first rises as the model
# starts fitting noise, then falls once the true spikes emerge.

# %%
for lam in (0.05, 0.12, 0.2, 0.25, 0.5, 1, 5, 50):
    res = mse_sph(SignalModel([2, 2], lam), InferenceModel([3, 3], lam))
    print(f"{lam:<6g} total={res.total:.5f}  overfit={res.overfitting_term:.5f}  d,c,e={res.profile.d},{res.profile.c},{res.profile.e}")
