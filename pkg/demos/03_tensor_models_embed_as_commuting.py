"""Every tensor model is a commuting model in disguise.

Extending one party's operators by the identity on the other party's space
realizes the tensor-product structure as a pair of commuting subalgebras on
the joint space.  The entrywise commutation report certifies the embedding,
and the induced channel family is preserved exactly; unrelated unitaries on
a shared space fail the same certificate by a wide margin.
"""

import numpy as np

from uichan import (CommutingModel, channel_direct, embed_tensor_as_commuting, linalg,
                    random_tensor_model, validate_commuting)

tm = random_tensor_model(n=2, m=2, dA=2, dB=2, seed=5)
cm = embed_tensor_as_commuting(tm)
print(f"embedded model lives on d = {cm.d} = dA*dB = {tm.dA}*{tm.dB}")

report = validate_commuting(cm)
print(f"entrywise commutation: max commutator {report.max_commutator:.3e}, "
      f"max unitarity defect {report.max_unitarity_defect:.3e} "
      f"-> accepted={report.accepted}")

gap = max(np.max(np.abs(channel_direct(tm).supers[x][y] - channel_direct(cm).supers[x][y]))
          for x in range(2) for y in range(2))
print(f"channel family preserved by the embedding, max gap {gap:.3e}")
assert gap < 1e-12

# what failure looks like: unrelated unitaries on the same space do not commute
rng = linalg.rng_from_seed(99)
impostor = CommutingModel(n=2, m=1, d=4,
                          state=linalg.haar_state_vector(rng, 4),
                          U=(linalg.haar_unitary_from(rng, 8),),
                          V=(linalg.haar_unitary_from(rng, 8),))
bad = validate_commuting(impostor)
print(f"unrelated Haar unitaries: max commutator {bad.max_commutator:.3f} "
      f"-> accepted={bad.accepted}")
