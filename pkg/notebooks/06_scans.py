"""Parameter scans with deterministic seeds (small sizes for a quick run)."""
import numpy as np

from qorrelate.experiments import (isotropic_thresholds, ppt_agreement, scan_horodecki,
                                   scan_random_steering, werner_thresholds)

steer = scan_random_steering(2000, seed=0)
print('random steering:', steer.summary)

hor = scan_horodecki(np.linspace(0, 1, 11), np.linspace(0.99, 1, 11), bisect_iter=20)
print('Horodecki detections:', hor.summary)

print('Werner:', werner_thresholds().summary)
print('isotropic:', isotropic_thresholds().rows)

ppt = ppt_agreement(200, seed=0, n_separable=200).summary
print('PPT agreement:', {k: v for k, v in ppt.items() if k != 'disagreements'})

with open('random_steering.svg', 'w') as fh:
    fh.write(steer.to_svg())
