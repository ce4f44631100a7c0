"""BPSK modulation, AWGN sampling, and channel LLR computation.

Noise is generated by the inverse-CDF method (ndtri applied to centered
uniform draws) so that statistical behaviour is portable across platforms.
Each frame owns a counter-derived substream, which makes simulations
deterministic regardless of how frames are scheduled across workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .rm_core import ConfigurationError

_U53 = float(1 << 53)


@dataclass(frozen=True)
class ChannelConfig:
    ebn0_db: float
    rate: float
    sigma: float
    seed: int = 0

    @classmethod
    def for_rate(cls, ebn0_db: float, rate: float, seed: int = 0) -> "ChannelConfig":
        if rate <= 0 or rate > 1:
            raise ConfigurationError(f"rate {rate} outside (0, 1]")
        sigma = 1.0 / np.sqrt(2.0 * rate * 10.0 ** (ebn0_db / 10.0))
        return cls(ebn0_db=ebn0_db, rate=rate, sigma=float(sigma), seed=seed)


def frame_rng(seed: int, *key: int) -> np.random.Generator:
    """Substream for one frame, derived from (seed, key...)."""
    return np.random.default_rng(np.random.SeedSequence((int(seed),) + tuple(int(k) for k in key)))


def gaussian(rng: np.random.Generator, size: int) -> np.ndarray:
    # centered uniforms keep ndtri away from 0 and 1 exactly
    u = (rng.integers(0, 1 << 53, size=size).astype(np.float64) + 0.5) / _U53
    return ndtri(u)


def transmit(x: np.ndarray, cfg: ChannelConfig, rng: np.random.Generator,
             zero_noise: bool = False) -> np.ndarray:
    """BPSK-modulate x and add AWGN: y = (1 - 2x) + z, z ~ N(0, sigma^2)."""
    x = np.asarray(x)
    symbols = 1.0 - 2.0 * x.astype(np.float64)
    if zero_noise:
        return symbols
    return symbols + cfg.sigma * gaussian(rng, x.shape[-1])


def llr(y: np.ndarray, cfg: ChannelConfig) -> np.ndarray:
    """Channel LLRs for BPSK over AWGN: 2 y / sigma^2."""
    if cfg.sigma <= 0:
        raise ConfigurationError("sigma must be positive")
    return 2.0 * np.asarray(y, dtype=np.float64) / (cfg.sigma ** 2)
