# %% [markdown]
# # Free energy, its gradient, and the MSE it encodes
#
# The limiting free energy can be computed two ways: from the per-component
# closed forms, or by adding up rank-one spherical-integral rates evaluated at
# the outlier locations.  Its SNR derivatives then give back the MSE.

# %%
from spikedmse import (
    InferenceModel,
    SignalModel,
    asymptotic_free_energy,
    free_energy_grad,
    immse_residual,
    mse_sph,
)
from spikedmse.free_energy import free_energy_from_spherical_integrals, free_energy_grad_fd

signal = SignalModel([2.0, 1.2, 0.4], snr_true=2.5)
inference = InferenceModel([1.8, 1.0, 0.9, 0.7], snr_inferred=3.0)

fe = asymptotic_free_energy(signal, inference)
print("closed form      ", fe.value)
print("spherical ints   ", free_energy_from_spherical_integrals(signal, inference))
print("h1 terms", fe.per_component_h1, "h2 terms", fe.per_component_h2)

# %%
print("gradient (closed)", free_energy_grad(signal, inference))
print("gradient (fd)    ", free_energy_grad_fd(signal, inference))

# %%
res = mse_sph(signal, inference)
print("MSE", res.total, "residual", immse_residual(signal, inference))
# same identity, gradients from finite differences only
print("residual (fd)", immse_residual(signal, inference, finite_differences=True))
