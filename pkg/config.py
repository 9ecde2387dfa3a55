"""
Configuration for ClipBridge
Contains the published hyperparameters, bundle file names and TrainConfig
"""

from dataclasses import asdict, dataclass
from typing import Tuple

from core.errors import BadSpec

# =======================
# LOSS WEIGHTS
# =======================
# Adversarial and CORAL losses differ by orders of magnitude, so CORAL is
# weighted 100x at both levels.
DEFAULT_LAMBDA1 = 1.0     # low-level adversarial
DEFAULT_LAMBDA2 = 100.0   # low-level CORAL
DEFAULT_LAMBDA3 = 1.0     # high-level adversarial
DEFAULT_LAMBDA4 = 100.0   # high-level CORAL
# Frobenius weight regularizer; 1.0 is the objective as published. Small
# networks on low-dimensional data need far less, see README.
DEFAULT_REG_WEIGHT = 1.0

# =======================
# OPTIMIZATION
# =======================
DEFAULT_LR_LOW = 2e-5
DEFAULT_LR_HIGH = 8e-6
DEFAULT_BATCH_SIZE = 64
DEFAULT_ITERATIONS = 20000
DEFAULT_SEED = 0

# Source classifier (multinomial logistic regression)
DEFAULT_CLASSIFIER_ITERATIONS = 2000
DEFAULT_CLASSIFIER_TOL = 1e-6
DEFAULT_CLASSIFIER_L2 = 1e-4

# =======================
# ABLATIONS & ARCHITECTURES
# =======================
ABLATIONS = ('full', 'coral_only', 'adversarial_only')
ARCHITECTURES = ('auto', 'large', 'desk')
LEVELS = ('low', 'high')

ARCHITECTURES_FILE = "architectures.yaml"

# =======================
# BUNDLE FILE NAMES
# =======================
HS_FILE = "H_s.hgf"
HF_FILE = "H_f.hgf"
F_FILE = "F.hgf"
V_FILE = "V.hgf"
LABELS_S_FILE = "labels_s.txt"
LABELS_T_FILE = "labels_t.txt"
CLIPS_FILE = "clips.txt"

# Pipeline outputs
HT_FILE = "H_t.hgf"
VF_FILE = "V_f.hgf"
HV_FILE = "H_v.hgf"
METRICS_FILE = "metrics.txt"
REPORT_CSV_COLUMNS = ['iter', 'd_loss', 'g_adv', 'coral', 'reg', 'total']


@dataclass(frozen=True)
class TrainConfig:
    lambda1: float = DEFAULT_LAMBDA1
    lambda2: float = DEFAULT_LAMBDA2
    lambda3: float = DEFAULT_LAMBDA3
    lambda4: float = DEFAULT_LAMBDA4
    reg_weight: float = DEFAULT_REG_WEIGHT
    lr_low: float = DEFAULT_LR_LOW
    lr_high: float = DEFAULT_LR_HIGH
    batch_size: int = DEFAULT_BATCH_SIZE
    iterations: int = DEFAULT_ITERATIONS
    seed: int = DEFAULT_SEED
    ablation: str = 'full'       # 'full' | 'coral_only' | 'adversarial_only'
    architecture: str = 'auto'   # 'auto' | 'large' | 'desk'
    classifier_iterations: int = DEFAULT_CLASSIFIER_ITERATIONS
    classifier_tol: float = DEFAULT_CLASSIFIER_TOL
    classifier_l2: float = DEFAULT_CLASSIFIER_L2

    def validate(self) -> "TrainConfig":
        for name in ('lambda1', 'lambda2', 'lambda3', 'lambda4', 'reg_weight'):
            if getattr(self, name) < 0:
                raise BadSpec(f"{name} must be nonnegative, got {getattr(self, name)}")
        for name in ('lr_low', 'lr_high'):
            if getattr(self, name) <= 0:
                raise BadSpec(f"{name} must be positive, got {getattr(self, name)}")
        if self.batch_size < 2:
            raise BadSpec(f"batch_size must be >= 2, got {self.batch_size}")
        if self.iterations < 0:
            raise BadSpec(f"iterations must be >= 0, got {self.iterations}")
        if self.seed < 0:
            raise BadSpec(f"seed must be >= 0, got {self.seed}")
        if self.ablation not in ABLATIONS:
            raise BadSpec(f"ablation must be one of {ABLATIONS}, got {self.ablation!r}")
        if self.architecture not in ARCHITECTURES:
            raise BadSpec(f"architecture must be one of {ARCHITECTURES}, got {self.architecture!r}")
        if self.classifier_iterations < 1 or self.classifier_tol <= 0 or self.classifier_l2 < 0:
            raise BadSpec("classifier iterations must be >= 1, tolerance > 0, l2 >= 0")
        return self

    def loss_weights(self, level: str) -> Tuple[float, float]:
        """(adversarial, CORAL) coefficients for a level with the ablation applied."""
        if level == 'low':
            w_adv, w_coral = self.lambda1, self.lambda2
        elif level == 'high':
            w_adv, w_coral = self.lambda3, self.lambda4
        else:
            raise BadSpec(f"level must be 'low' or 'high', got {level!r}")
        if self.ablation == 'coral_only':
            w_adv = 0.0
        elif self.ablation == 'adversarial_only':
            w_coral = 0.0
        return float(w_adv), float(w_coral)

    def learning_rate(self, level: str) -> float:
        return self.lr_low if level == 'low' else self.lr_high

    def as_dict(self) -> dict:
        return asdict(self)
