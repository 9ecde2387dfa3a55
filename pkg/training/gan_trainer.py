"""
Conditional least-squares GAN training, used once per level.

Each iteration samples one paired minibatch (condition_k, real_k), then
  D-step: minimize lsgan_d_loss(D(c||real), D(c||G(c))) + reg_weight*reg(D), G frozen
  G-step: minimize lambda_adv*lsgan_g_loss(D(c||G(c))) + lambda_coral*coral(real, G(c)) + reg_weight*reg(G), D frozen
"""

import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from config import REPORT_CSV_COLUMNS, TrainConfig
from core.errors import BadSpec, DegenerateSample, EmptyDataset, NonFiniteLoss, ShapeMismatch
from core.linalg import as_matrix, hstack
from core.losses import coral_loss, combined_objective, lsgan_d_loss, lsgan_g_loss, reg_loss
from core.mlp import LayerGrad, MlpNetwork, backward, forward, init_network
from core.optim import AdamState, adam_step
from .architectures import level_specs

logger = logging.getLogger(__name__)

# distinct init seeds per network so the four networks never share weights
_SEED_OFFSETS = {
    ('low', 'generator'): 0,
    ('low', 'discriminator'): 1,
    ('high', 'generator'): 2,
    ('high', 'discriminator'): 3,
}
_SAMPLER_SALT = {'low': 11, 'high': 13}


@dataclass
class GanLevel:
    generator: MlpNetwork
    discriminator: MlpNetwork
    level: str            # 'low' | 'high'
    lambda_adv: float
    lambda_coral: float

    @property
    def cond_dim(self) -> int:
        return self.generator.in_dim

    @property
    def sample_dim(self) -> int:
        return self.generator.out_dim

    def validate(self) -> "GanLevel":
        if self.level not in _SAMPLER_SALT:
            raise BadSpec(f"level must be 'low' or 'high', got {self.level!r}")
        if self.discriminator.in_dim != self.cond_dim + self.sample_dim:
            raise ShapeMismatch(
                f"{self.level} discriminator takes {self.discriminator.in_dim} inputs, "
                f"expected condition {self.cond_dim} + sample {self.sample_dim}")
        if self.discriminator.out_dim != 1:
            raise ShapeMismatch(f"{self.level} discriminator must emit one score, emits {self.discriminator.out_dim}")
        if self.lambda_adv < 0 or self.lambda_coral < 0:
            raise BadSpec("loss weights must be nonnegative")
        return self

    def copy(self) -> "GanLevel":
        return GanLevel(self.generator.copy(), self.discriminator.copy(),
                        self.level, self.lambda_adv, self.lambda_coral)


def build_level(level: str, cond_dim: int, sample_dim: int, cfg: TrainConfig, preset: str) -> GanLevel:
    """Freshly initialized generator/discriminator pair for one level."""
    g_specs, d_specs = level_specs(level, cond_dim, sample_dim, preset)
    w_adv, w_coral = cfg.loss_weights(level)
    return GanLevel(
        generator=init_network(g_specs, cfg.seed * 4 + _SEED_OFFSETS[(level, 'generator')]),
        discriminator=init_network(d_specs, cfg.seed * 4 + _SEED_OFFSETS[(level, 'discriminator')]),
        level=level,
        lambda_adv=w_adv,
        lambda_coral=w_coral,
    ).validate()


@dataclass
class TrainRecord:
    iteration: int
    d_loss: float
    g_adv: float
    coral: float
    reg: float
    total: float


@dataclass
class TrainReport:
    level: str
    lambda_adv: float
    lambda_coral: float
    records: List[TrainRecord] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        rows = [asdict(r) for r in self.records]
        df = pd.DataFrame(rows, columns=['iteration', 'd_loss', 'g_adv', 'coral', 'reg', 'total'])
        return df.rename(columns={'iteration': 'iter'})[REPORT_CSV_COLUMNS]

    def to_csv(self, path: Union[str, Path]) -> None:
        self.to_frame().to_csv(path, index=False, float_format='%.10g')

    @property
    def last(self) -> Optional[TrainRecord]:
        return self.records[-1] if self.records else None


def minibatches(n: int, batch_size: int, rng: np.random.Generator) -> Iterator[np.ndarray]:
    """
    Endless stream of row-index batches. Each epoch is a fresh permutation;
    a trailing short batch is used only if it has at least 2 rows.
    """
    while True:
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start:start + batch_size]
            if idx.size >= 2:
                yield idx


def generate(level: GanLevel, conditions) -> np.ndarray:
    """Deterministic generator pass; row i of the output belongs to row i of conditions."""
    out, _ = forward(level.generator, conditions)
    return out


def _sum_grads(*parts: List[LayerGrad]) -> List[LayerGrad]:
    return [
        LayerGrad(weights=sum(p[i].weights for p in parts), bias=sum(p[i].bias for p in parts))
        for i in range(len(parts[0]))
    ]


def _with_reg(grads: List[LayerGrad], reg_grads: List[np.ndarray]) -> List[LayerGrad]:
    return [LayerGrad(g.weights + r, g.bias) for g, r in zip(grads, reg_grads)]


def _check_finite(iteration: int, what: str, *values: float) -> None:
    if not all(np.isfinite(v) for v in values):
        raise NonFiniteLoss(f"non-finite {what} at iteration {iteration}", iteration=iteration)


def train_gan(level: GanLevel, conditions, reals, cfg: TrainConfig,
              progress: bool = False) -> Tuple[GanLevel, TrainReport]:
    """
    Run cfg.iterations alternating D/G steps on the row-aligned pairs
    (conditions[k], reals[k]). Returns the trained level and its loss trace;
    the input level is not modified.
    """
    cfg.validate()
    level.validate()
    if (level.lambda_adv, level.lambda_coral) != cfg.loss_weights(level.level):
        raise BadSpec(f"{level.level} level weights {level.lambda_adv}/{level.lambda_coral} "
                      f"disagree with config {cfg.loss_weights(level.level)}")
    conditions = as_matrix(conditions, "conditions")
    reals = as_matrix(reals, "reals")
    n = conditions.shape[0]
    if n == 0 or reals.shape[0] == 0:
        raise EmptyDataset(f"{level.level} level has no training pairs")
    if reals.shape[0] != n:
        raise ShapeMismatch(f"{n} conditions but {reals.shape[0]} reals; pairs must be row-aligned")
    if conditions.shape[1] != level.cond_dim or reals.shape[1] != level.sample_dim:
        raise ShapeMismatch(
            f"{level.level} level expects conditions ×{level.cond_dim} and reals ×{level.sample_dim}, "
            f"got ×{conditions.shape[1]} and ×{reals.shape[1]}")
    if n < 2:
        raise DegenerateSample(f"{level.level} level needs at least 2 training pairs, got {n}")

    batch_size = cfg.batch_size
    if n < batch_size:
        logger.warning("%s level: batch size %d exceeds %d training pairs, using %d",
                       level.level, batch_size, n, n)
        batch_size = n

    report = TrainReport(level.level, level.lambda_adv, level.lambda_coral)
    G, D = level.generator.copy(), level.discriminator.copy()
    if cfg.iterations == 0:
        return GanLevel(G, D, level.level, level.lambda_adv, level.lambda_coral), report

    lr = cfg.learning_rate(level.level)
    g_state, d_state = AdamState(lr=lr), AdamState(lr=lr)
    rng = np.random.default_rng([cfg.seed, _SAMPLER_SALT[level.level]])
    batches = minibatches(n, batch_size, rng)
    cond_dim = level.cond_dim

    logger.info("training %s GAN: %d pairs, batch %d, %d iterations, lr %g, weights adv=%g coral=%g reg=%g",
                level.level, n, batch_size, cfg.iterations, lr, level.lambda_adv, level.lambda_coral, cfg.reg_weight)

    for it in tqdm(range(1, cfg.iterations + 1), desc=f"{level.level} GAN", disable=not progress):
        idx = next(batches)
        C, R = conditions[idx], reals[idx]
        fake, g_trace = forward(G, C)
        if not np.all(np.isfinite(fake)):
            raise NonFiniteLoss(f"generator output became non-finite at iteration {it}", iteration=it)

        # D-step, generator frozen
        d_real, tr_real = forward(D, hstack(C, R))
        d_fake, tr_fake = forward(D, hstack(C, fake))
        d_adv = lsgan_d_loss(d_real, d_fake)
        d_reg = reg_loss([D])
        _check_finite(it, "discriminator loss", d_adv.value, d_reg.value)
        grads_real, _ = backward(D, tr_real, d_adv.grads['d_real'])
        grads_fake, _ = backward(D, tr_fake, d_adv.grads['d_fake'])
        d_grads = _with_reg(_sum_grads(grads_real, grads_fake),
                           [cfg.reg_weight * w for w in d_reg.grads['weights'][0]])
        D, d_state = adam_step(D, d_grads, d_state)

        # G-step, discriminator frozen
        d_gen, tr_gen = forward(D, hstack(C, fake))
        g_adv = lsgan_g_loss(d_gen)
        coral = coral_loss(R, fake)
        g_reg = reg_loss([G])
        objective = combined_objective(level.level, g_adv, coral, g_reg, cfg)
        _check_finite(it, "generator objective", g_adv.value, coral.value, g_reg.value, objective.value)
        _, d_input = backward(D, tr_gen, objective.grads['adv.d_fake'])
        d_fake_out = d_input[:, cond_dim:] + objective.grads['coral.generated']
        g_grads, _ = backward(G, g_trace, d_fake_out)
        G, g_state = adam_step(G, _with_reg(g_grads, objective.grads['reg.weights'][0]), g_state)

        if not (G.all_finite() and D.all_finite()):
            raise NonFiniteLoss(f"parameters became non-finite at iteration {it}", iteration=it)

        report.records.append(TrainRecord(it, d_adv.value, g_adv.value, coral.value,
                                          g_reg.value, objective.value))
        if it % 1000 == 0:
            logger.debug("%s it=%d d=%.5g g_adv=%.5g coral=%.5g reg=%.5g total=%.5g",
                         level.level, it, d_adv.value, g_adv.value, coral.value, g_reg.value, objective.value)

    last = report.last
    logger.info("%s GAN done: d_loss=%.5g g_adv=%.5g coral=%.5g", level.level, last.d_loss, last.g_adv, last.coral)
    return GanLevel(G, D, level.level, level.lambda_adv, level.lambda_coral), report
