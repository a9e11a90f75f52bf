"""Reproducible sampling of correlated Gaussian and Student-t observations.

Random number identity (pinned for reproducibility): every draw uses
``numpy.random.Generator`` over the PCG64 bit generator, seeded through
``numpy.random.SeedSequence``.  Normal variates come from
``Generator.standard_normal`` (ziggurat method).  Identical seed material
therefore yields bit-identical samples within one NumPy build.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateParameters, NotPositiveSemiDefinite
from .model import PSD_TOL

MODELS = ("gaussian", "student_t")
_MODEL_CODES = {name: i for i, name in enumerate(MODELS)}


def derive_seed(master_seed: int, trial_index: int, t_length: int, model: str,
                extra: tuple[int, ...] = ()) -> np.random.SeedSequence:
    """Per-trial seed material, independent of execution order.

    The tuple (master_seed, trial_index, T, model, *extra) is fed to
    ``SeedSequence``, so concurrent trials can be dispatched in any order
    without changing any trial's stream.
    """
    if model not in _MODEL_CODES:
        raise DegenerateParameters(f"unknown model {model!r}, expected one of {MODELS}")
    return np.random.SeedSequence(
        entropy=[int(master_seed), int(trial_index), int(t_length), _MODEL_CODES[model], *extra]
    )


def generator(seed: int | np.random.SeedSequence) -> np.random.Generator:
    """The package-wide Generator: PCG64 over a SeedSequence."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.PCG64(seed))


def correlation_factor(sigma: np.ndarray) -> np.ndarray:
    """Symmetric factor F with F @ F.T == sigma.

    Uses an eigendecomposition and clips slightly negative eigenvalues to
    zero, so numerically rank-deficient block matrices are accepted; a
    meaningfully negative eigenvalue raises NotPositiveSemiDefinite.
    """
    sigma = np.asarray(sigma, dtype=float)
    w, v = np.linalg.eigh(sigma)
    if w.min() < -PSD_TOL * sigma.shape[0]:
        raise NotPositiveSemiDefinite(
            f"cannot factor matrix with eigenvalue {w.min():.3e}"
        )
    return v * np.sqrt(np.clip(w, 0.0, None))


@dataclass(frozen=True)
class SamplerSpec:
    """Everything needed to draw one reproducible sample matrix.

    ``sigma`` is the target correlation matrix.  For ``student_t`` the rows
    are multivariate t with ``nu`` degrees of freedom and scale matrix
    (nu - 2) / nu * sigma, so the population covariance is sigma itself.
    """

    model: str
    sigma: np.ndarray = field(repr=False)
    nu: float = 3.0
    seed: int | np.random.SeedSequence = 0

    def __post_init__(self):
        if self.model not in MODELS:
            raise DegenerateParameters(f"unknown model {self.model!r}, expected one of {MODELS}")
        if self.model == "student_t" and not self.nu > 2.0:
            raise DegenerateParameters(f"student_t needs nu > 2 for a covariance, got {self.nu}")


def sample(spec: SamplerSpec, t_length: int) -> np.ndarray:
    """Draw a T x N matrix of i.i.d. rows under the spec's model.

    Gaussian rows have covariance sigma.  Student-t rows are built as a
    correlated Gaussian draw divided per row by sqrt(chi2_nu / nu); the
    shared row divisor is what produces tail dependence across columns.
    """
    if t_length < 2:
        raise DegenerateParameters(f"sample length must be >= 2, got {t_length}")
    factor = correlation_factor(spec.sigma)
    rng = generator(spec.seed)
    z = rng.standard_normal((t_length, factor.shape[0])) @ factor.T
    if spec.model == "gaussian":
        return z
    z *= np.sqrt((spec.nu - 2.0) / spec.nu)
    u = rng.chisquare(spec.nu, size=t_length)
    z /= np.sqrt(u / spec.nu)[:, None]
    return z
