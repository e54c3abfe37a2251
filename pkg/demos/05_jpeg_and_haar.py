"""Texture machinery: the JPEG round-trip simulator and the Haar pyramid.

The block codec supplies the texture-mismatch degradation (quality sweep
shown below); the orthonormal Haar transform backs the band-reweighted loss
ablation and reconstructs exactly.
"""

import numpy as np

from seamlab import haar_forward, haar_inverse, haar_weighted_l1, jpeg_simulate, make_rng
from seamlab.synth import synthetic_photo

photo = synthetic_photo(256, 256, make_rng(41))

print("JPEG quality sweep (mean |error| in 8-bit levels):")
for quality in (10, 30, 50, 80, 95, 100):
    err = np.abs(jpeg_simulate(photo, quality) - photo).mean() * 255
    print(f"  q={quality:3d}: {err:6.3f}")

pyramid = haar_forward(photo, 3)
recon = haar_inverse(pyramid)
print(f"\nHaar: 3-level reconstruction max error {np.abs(recon - photo).max():.2e}")

energy = float(np.sum(pyramid.approx**2))
for bands in pyramid.details:
    for band in bands:
        energy += float(np.sum(band**2))
print(f"Haar: energy ratio coefficients/pixels = {energy / float(np.sum(photo**2)):.9f}")

# Band-reweighted L1: a constant color offset lives purely in the low band,
# fine noise purely in the detail bands.
offset = photo + 0.02
noisy = photo + make_rng(42).normal(0, 0.02, photo.shape)
for tag, other in (("constant offset", offset), ("fine noise", noisy)):
    low_heavy = haar_weighted_l1(photo, other, low_weight=4.0, high_weight=1.0, levels=3)
    flat = haar_weighted_l1(photo, other, low_weight=1.0, high_weight=1.0, levels=3)
    print(f"{tag:16s} low-weighted/flat loss ratio: {low_heavy / flat:.2f}")
