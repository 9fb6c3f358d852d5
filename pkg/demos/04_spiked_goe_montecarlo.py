# %% [markdown]
# # Finite-n spectra of a spiked GOE
#
# Spikes above one pop out of the semicircle at theta + 1/theta and their
# eigenvectors keep 1 - 1/theta^2 of the signal.  Weaker spikes vanish into
# the bulk.  Sizes here are kept small so the script finishes in seconds.

# %%
import numpy as np

from spikedmse import SignalModel, outlier_location, outlier_overlap_sq
from spikedmse.montecarlo import EnsembleConfig, orthogonality_experiment, spectral_report

sig = SignalModel([3.0, 1.6, 0.5], snr_true=1.0)
rep = spectral_report(EnsembleConfig(n=1200, trials=3, seed=7, signal=sig))
theta = np.asarray(sig.spike_strengths[: len(rep.outlier_means)])
print("empirical outliers", np.round(rep.outlier_means, 4))
print("predicted         ", np.round(outlier_location(theta), 4))
print("empirical overlap^2", np.round(rep.overlap_sq_means, 4))
print("predicted          ", np.round(outlier_overlap_sq(theta), 4))
print("bulk edge", round(rep.bulk_edge_mean, 4), "KS vs semicircle", round(rep.esd_ks, 4))

# %%
# Gaussian spikes: norms fluctuate, so the overlap is measured as a cosine.
rep = spectral_report(EnsembleConfig(n=1200, trials=3, seed=7, signal=SignalModel([3.0], 1.0), prior="gaussian"))
print(rep.outlier_means, rep.overlap_sq_means)

# %% [markdown]
# iid uniform vectors on the sphere are nearly orthogonal in high dimension.

# %%
for n, eps in ((2000, 0.1), (200, 0.1), (100, 0.01)):
    prob, bound = orthogonality_experiment(n, 3, eps, trials=100, seed=1)
    print(f"n={n:<5d} eps={eps:<5g} observed {prob:.2f}  bound {bound:.3g}")
