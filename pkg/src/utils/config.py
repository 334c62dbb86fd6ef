"""
Run and experiment configuration with documented defaults
"""
import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

logger = logging.getLogger(__name__)

# Inference defaults
DEFAULT_ALPHA = 0.1
DEFAULT_BOOTSTRAP_REPLICATES = 50
DEFAULT_CRITICAL_REPLICATES = 500
DEFAULT_MOTIFS = 'triangle,square'

# Experiment defaults
DEFAULT_RHO_EXPONENT = 1.0 / 3.0
KS_LEVEL = 0.01
MC_TOLERANCE_SE = 3.0
DEFAULT_BATCHES = 10
MAX_MOMENT_ORDER = 6


def generate_seed() -> int:
    """Fresh 32-bit seed from OS entropy"""
    return int(np.random.SeedSequence().generate_state(1, dtype=np.uint32)[0])


@dataclass
class RunConfig:
    """Command-line run: inputs, outputs, seed and preset overrides"""
    subcommand: str
    graph: Optional[str] = None
    motifs: str = DEFAULT_MOTIFS
    kernel: Optional[str] = None
    covariates: Optional[str] = None
    alpha: float = DEFAULT_ALPHA
    replicates: int = DEFAULT_BOOTSTRAP_REPLICATES
    critical_replicates: int = DEFAULT_CRITICAL_REPLICATES
    seed: Optional[int] = None
    workers: int = 1
    out: Optional[str] = None
    preset: Optional[str] = None
    overrides: Dict[str, str] = field(default_factory=dict)
    seed_generated: bool = False

    def ensure_seed(self) -> int:
        """Fill an absent seed with a generated one; returns the seed"""
        if self.seed is None:
            self.seed = generate_seed()
            self.seed_generated = True
            logger.info("generated seed %d", self.seed)
        return self.seed

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ExperimentConfig:
    """
    Monte Carlo experiment: kernel, size, sparsity rho = n^(-a), replicates
    and the target vertex policy (vertex 0 held in ``root_block``, optionally
    at latent position ``root_latent``)
    """
    kernel: Any
    n: int
    rho_exponent: float = DEFAULT_RHO_EXPONENT
    replicates: int = 200
    motifs: List[Any] = field(default_factory=list)
    root_block: int = 0
    root_latent: Optional[float] = None
    seed: int = 0
    workers: int = 1
    batches: int = DEFAULT_BATCHES

    @property
    def rho(self) -> float:
        return float(self.n) ** (-self.rho_exponent)

    def target_latent(self) -> float:
        """Latent position of the target vertex: the given one or its block's midpoint"""
        if self.root_latent is not None:
            return float(self.root_latent)
        edges = np.concatenate([[0.0], np.cumsum(self.kernel.pi)])
        return float((edges[self.root_block] + edges[self.root_block + 1]) / 2)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kernel': self.kernel.to_dict(),
            'n': self.n,
            'rho_exponent': self.rho_exponent,
            'rho': self.rho,
            'replicates': self.replicates,
            'motifs': [m.label for m in self.motifs],
            'root_block': self.root_block,
            'root_latent': self.target_latent(),
            'seed': self.seed,
            'workers': self.workers,
            'batches': self.batches,
        }
