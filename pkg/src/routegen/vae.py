"""Variational autoencoder over binary hold vectors.

Architecture (dims for the standard board): encoder 198 -> 256 -> 64 with
relu, then two linear heads of 16 for the posterior mean and log-variance;
decoder 16 -> 64 -> 256 -> 198 logits, sigmoid output. The latent is
sampled with the usual reparameterization ``z = mu + exp(logvar/2) * eps``.

The training objective per sample is the sum of three terms:

* ``binary``: Bernoulli cross-entropy summed over the 198 cells,
* ``count``: squared difference between the input hold count and the sum
  of output probabilities (keeps generated routes at a plausible length),
* ``kl``: closed-form KL divergence of the diagonal Gaussian posterior
  against the unit Gaussian prior, ``0.5 * (mu^2 + e^logvar - logvar - 1)``
  summed over the 16 latent dims.

Per-sample losses are summed over dimensions and averaged over the batch.
All gradients are derived by hand; see ``_backward``.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .board import NUM_HOLDS, problem_to_vector
from .data import Corpus
from .errors import DataError, EmptyCorpus, NonFiniteLoss, ShapeMismatch
from .nn import AdamState, LinearLayer, adam_step, linear_backward, matmul, relu, sigmoid

LATENT_DIM = 16
ENCODER_HIDDEN = (256, 64)

#: Output probabilities are clamped to this open interval before any log,
#: so the binary term has a strictly positive lower bound and never hits
#: -inf. The clamp width sits far below every test tolerance.
PROB_MIN = 1e-7
PROB_MAX = 1.0 - 1e-7

_CKPT_MAGIC = b"RGVAECKP"
_CKPT_VERSION = 1


@dataclass
class VaeModel:
    """Encoder/decoder parameters plus architecture metadata."""

    input_dim: int
    latent_dim: int
    encoder_hidden: tuple[int, int]
    enc1: LinearLayer
    enc2: LinearLayer
    head_mu: LinearLayer
    head_logvar: LinearLayer
    dec1: LinearLayer
    dec2: LinearLayer
    out: LinearLayer

    @classmethod
    def create(cls, seed: int = 0, input_dim: int = NUM_HOLDS,
               latent_dim: int = LATENT_DIM,
               hidden: tuple[int, int] = ENCODER_HIDDEN) -> "VaeModel":
        """Fresh model with Glorot-initialized weights, deterministic per seed."""
        rng = np.random.default_rng(seed)
        h1, h2 = hidden
        return cls(
            input_dim=input_dim,
            latent_dim=latent_dim,
            encoder_hidden=(h1, h2),
            enc1=LinearLayer.create(rng, h1, input_dim),
            enc2=LinearLayer.create(rng, h2, h1),
            head_mu=LinearLayer.create(rng, latent_dim, h2),
            head_logvar=LinearLayer.create(rng, latent_dim, h2),
            dec1=LinearLayer.create(rng, h2, latent_dim),
            dec2=LinearLayer.create(rng, h1, h2),
            out=LinearLayer.create(rng, input_dim, h1),
        )

    def layers(self) -> list[tuple[str, LinearLayer]]:
        """Layers in declared (checkpoint) order."""
        return [
            ("enc1", self.enc1),
            ("enc2", self.enc2),
            ("head_mu", self.head_mu),
            ("head_logvar", self.head_logvar),
            ("dec1", self.dec1),
            ("dec2", self.dec2),
            ("out", self.out),
        ]

    @property
    def decoder_hidden(self) -> tuple[int, int]:
        return (self.encoder_hidden[1], self.encoder_hidden[0])

    @property
    def n_params(self) -> int:
        return sum(l.weight.size + l.bias.size for _, l in self.layers())

    def architecture(self) -> dict:
        return {
            "input_dim": self.input_dim,
            "latent_dim": self.latent_dim,
            "encoder_hidden": list(self.encoder_hidden),
            "decoder_hidden": list(self.decoder_hidden),
            "n_params": self.n_params,
        }


@dataclass(frozen=True)
class LossBreakdown:
    """Per-sample (or epoch-averaged) loss terms. ``total`` is their sum."""

    binary: float
    count: float
    kl: float
    total: float

    @classmethod
    def of(cls, binary: float, count: float, kl: float) -> "LossBreakdown":
        return cls(binary=binary, count=count, kl=kl, total=binary + count + kl)


@dataclass(frozen=True)
class TrainConfig:
    """Training hyperparameters.

    Defaults mirror the reference setup (2000 epochs, batch 512); desk-scale
    corpora clamp the batch down automatically. ``noise_draws`` averages the
    stochastic part of the objective over several latent samples per input,
    a standard variance-reduction knob; 1 keeps the classic single-draw
    estimate. The term weights default to the plain unweighted sum and exist
    for experimentation only.
    """

    epochs: int = 2000
    batch_size: int = 512
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    adam_epsilon: float = 1e-8
    seed: int = 0
    noise_draws: int = 1
    binary_weight: float = 1.0
    count_weight: float = 1.0
    kl_weight: float = 1.0

    def __post_init__(self):
        if self.epochs < 1:
            raise DataError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise DataError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.noise_draws < 1:
            raise DataError(f"noise_draws must be >= 1, got {self.noise_draws}")


@dataclass
class TrainResult:
    model: VaeModel
    history: list[LossBreakdown]
    warnings: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# forward / backward


def encode(model: VaeModel, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Posterior mean and log-variance for one hold vector."""
    x = np.asarray(x, dtype=np.float64)
    h1 = relu(model.enc1.forward(x))
    h2 = relu(model.enc2.forward(h1))
    return model.head_mu.forward(h2), model.head_logvar.forward(h2)


def reparameterize(mu: np.ndarray, logvar: np.ndarray, noise: np.ndarray) -> np.ndarray:
    """``z = mu + exp(logvar/2) * noise`` with standard-normal ``noise``."""
    return mu + np.exp(0.5 * np.asarray(logvar, dtype=np.float64)) * noise


def decode(model: VaeModel, z: np.ndarray) -> np.ndarray:
    """Per-cell occupation probabilities, clamped strictly inside (0, 1)."""
    z = np.asarray(z, dtype=np.float64)
    t1 = relu(model.dec1.forward(z))
    t2 = relu(model.dec2.forward(t1))
    return np.clip(sigmoid(model.out.forward(t2)), PROB_MIN, PROB_MAX)


def loss_terms(x: np.ndarray, probs: np.ndarray, mu: np.ndarray,
               logvar: np.ndarray) -> LossBreakdown:
    """The three loss terms for a single sample.

    ``binary`` is the Bernoulli cross-entropy over all cells, ``count`` the
    squared hold-count mismatch, ``kl`` the Gaussian KL against the unit
    prior. Probabilities are clamped before the logs.
    """
    x = np.asarray(x, dtype=np.float64)
    p = np.clip(np.asarray(probs, dtype=np.float64), PROB_MIN, PROB_MAX)
    mu = np.asarray(mu, dtype=np.float64)
    lv = np.asarray(logvar, dtype=np.float64)
    # overflow is allowed to produce inf here; the finiteness check below
    # turns it into the contracted error instead of a warning
    with np.errstate(over="ignore", invalid="ignore"):
        binary = float(-np.sum(x * np.log(p) + (1.0 - x) * np.log1p(-p)))
        count = float((np.sum(x) - np.sum(p)) ** 2)
        kl = float(0.5 * np.sum(mu * mu + np.exp(lv) - lv - 1.0))
    for name, v in (("binary", binary), ("count", count), ("kl", kl)):
        if not np.isfinite(v):
            raise NonFiniteLoss(f"{name} loss is not finite ({v})")
    return LossBreakdown.of(binary, count, kl)


def _forward(model: VaeModel, X: np.ndarray, noise: np.ndarray) -> dict:
    """Batched forward pass keeping every intermediate for backprop.

    Overflow to inf is tolerated; the training loop checks the resulting
    terms and raises :class:`NonFiniteLoss` with context.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        return _forward_inner(model, X, noise)


def _forward_inner(model: VaeModel, X: np.ndarray, noise: np.ndarray) -> dict:
    a1 = model.enc1.forward(X)
    h1 = relu(a1)
    a2 = model.enc2.forward(h1)
    h2 = relu(a2)
    mu = model.head_mu.forward(h2)
    lv = model.head_logvar.forward(h2)
    z = mu + np.exp(0.5 * lv) * noise
    u1 = model.dec1.forward(z)
    t1 = relu(u1)
    u2 = model.dec2.forward(t1)
    t2 = relu(u2)
    logits = model.out.forward(t2)
    p_raw = sigmoid(logits)
    p = np.clip(p_raw, PROB_MIN, PROB_MAX)
    bt = -(X * np.log(p) + (1.0 - X) * np.log1p(-p))
    binary_k = np.sum(bt, axis=1)
    Sx = np.sum(X, axis=1)
    Sp = np.sum(p, axis=1)
    count_k = (Sx - Sp) ** 2
    kl_k = 0.5 * np.sum(mu * mu + np.exp(lv) - lv - 1.0, axis=1)
    return {
        "X": X, "noise": noise, "a1": a1, "h1": h1, "a2": a2, "h2": h2,
        "mu": mu, "lv": lv, "z": z, "u1": u1, "t1": t1, "u2": u2, "t2": t2,
        "logits": logits, "p_raw": p_raw, "p": p, "bt": bt, "Sx": Sx, "Sp": Sp,
        "binary_k": binary_k, "count_k": count_k, "kl_k": kl_k,
    }


def _backward(model: VaeModel, cache: dict, weights: tuple[float, float, float]) -> np.ndarray:
    """Analytic gradients of the batch-mean weighted loss, flat-packed.

    Per-sample deltas are propagated unscaled and every accumulated
    gradient is divided by the batch size once at the end, matching a
    sum-then-average per-sample loop exactly.
    """
    wb, wc, wk = weights
    X, noise = cache["X"], cache["noise"]
    B = X.shape[0]
    p, p_raw = cache["p"], cache["p_raw"]
    mu, lv = cache["mu"], cache["lv"]

    for _, layer in model.layers():
        layer.zero_grads()

    inside = (p_raw > PROB_MIN) & (p_raw < PROB_MAX)
    dp = wb * (p - X) / (p * (1.0 - p))
    dp = dp + (wc * 2.0 * (np.sum(p, axis=1) - np.sum(X, axis=1)))[:, None]
    dlogits = dp * (p_raw * (1.0 - p_raw)) * inside

    dt2 = linear_backward(model.out, cache["t2"], dlogits)
    du2 = dt2 * (cache["u2"] > 0)
    dt1 = linear_backward(model.dec2, cache["t1"], du2)
    du1 = dt1 * (cache["u1"] > 0)
    dz = linear_backward(model.dec1, cache["z"], du1)

    dmu = dz + wk * mu
    dlv = dz * (0.5 * np.exp(0.5 * lv) * noise) + wk * 0.5 * (np.exp(lv) - 1.0)
    dh2 = linear_backward(model.head_mu, cache["h2"], dmu)
    dh2 = dh2 + linear_backward(model.head_logvar, cache["h2"], dlv)
    da2 = dh2 * (cache["a2"] > 0)
    dh1 = linear_backward(model.enc2, cache["h1"], da2)
    da1 = dh1 * (cache["a1"] > 0)
    linear_backward(model.enc1, X, da1)

    parts = []
    for _, layer in model.layers():
        parts.append(layer.grad_weight.ravel() / B)
        parts.append(layer.grad_bias / B)
    return np.concatenate(parts)


# ---------------------------------------------------------------------------
# flat parameter plumbing


def pack_params(model: VaeModel) -> np.ndarray:
    """All parameters concatenated into one float64 vector (a copy)."""
    parts = []
    for _, layer in model.layers():
        parts.append(layer.weight.ravel())
        parts.append(layer.bias)
    return np.concatenate(parts)


def bind_params(model: VaeModel, flat: np.ndarray) -> None:
    """Point every layer's weight/bias at views into ``flat``."""
    offset = 0
    for _, layer in model.layers():
        n = layer.weight.size
        layer.weight = flat[offset:offset + n].reshape(layer.weight.shape)
        offset += n
        n = layer.bias.size
        layer.bias = flat[offset:offset + n]
        offset += n
    if offset != flat.size:
        raise ShapeMismatch(f"flat vector has {flat.size} entries, model needs {offset}")


def unbind_params(model: VaeModel) -> None:
    """Give every layer its own copy of the current parameters."""
    for _, layer in model.layers():
        layer.weight = layer.weight.copy()
        layer.bias = layer.bias.copy()


def _layer_boundaries(model: VaeModel) -> np.ndarray:
    """Cumulative end offset of each layer's (weight, bias) block."""
    ends = []
    offset = 0
    for _, layer in model.layers():
        offset += layer.weight.size + layer.bias.size
        ends.append(offset)
    return np.asarray(ends)


# ---------------------------------------------------------------------------
# training


def _batch_terms(cache: dict) -> tuple[float, float, float]:
    return (
        float(np.sum(cache["binary_k"])),
        float(np.sum(cache["count_k"])),
        float(np.sum(cache["kl_k"])),
    )


def train(model: VaeModel, corpus: Corpus, config: TrainConfig) -> TrainResult:
    """Train ``model`` in place; returns it plus the per-epoch loss history.

    Fully deterministic for a given config seed: initialization comes with
    the model, and shuffling plus reparameterization noise are drawn from
    one seeded generator in a fixed order. A batch size larger than the
    corpus is clamped with a warning record. Non-finite losses abort with
    epoch/batch context.
    """
    n = len(corpus)
    if n == 0:
        raise EmptyCorpus("cannot train on an empty corpus")
    warnings: list[str] = []
    batch_size = config.batch_size
    if batch_size > n:
        warnings.append(
            f"batch_size {batch_size} exceeds corpus size {n}; clamped to {n}"
        )
        batch_size = n

    X = np.stack([problem_to_vector(p) for p in corpus]).astype(np.float64)
    weights = (config.binary_weight, config.count_weight, config.kl_weight)
    rng = np.random.default_rng(config.seed)
    R = config.noise_draws

    flat = pack_params(model)
    bind_params(model, flat)
    adam = AdamState.for_params(
        flat,
        learning_rate=config.learning_rate,
        beta1=config.beta1,
        beta2=config.beta2,
        epsilon=config.adam_epsilon,
    )

    history: list[LossBreakdown] = []
    n_batches = (n + batch_size - 1) // batch_size
    for epoch in range(config.epochs):
        perm = rng.permutation(n)
        sums = np.zeros(3)
        rows_seen = 0
        for b in range(n_batches):
            idx = perm[b * batch_size:(b + 1) * batch_size]
            xb = X[idx]
            if R > 1:
                xb = np.repeat(xb, R, axis=0)
            noise = rng.standard_normal((xb.shape[0], model.latent_dim))
            cache = _forward(model, xb, noise)
            tb, tc, tk = _batch_terms(cache)
            if not (np.isfinite(tb) and np.isfinite(tc) and np.isfinite(tk)):
                raise NonFiniteLoss(
                    f"non-finite loss at epoch {epoch}, batch {b} "
                    f"(binary={tb}, count={tc}, kl={tk})",
                    epoch=epoch, batch=b,
                )
            grads = _backward(model, cache, weights)
            flat = adam_step(adam, flat, grads)
            bind_params(model, flat)
            sums += (tb, tc, tk)
            rows_seen += xb.shape[0]
        mb, mc, mk = sums / rows_seen
        history.append(LossBreakdown.of(float(mb), float(mc), float(mk)))
    unbind_params(model)
    return TrainResult(model=model, history=history, warnings=warnings)


def write_loss_csv(history: list[LossBreakdown], path: str | Path) -> None:
    """Loss log as ``epoch,binary,count,kl,total`` with full float precision."""
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("epoch,binary,count,kl,total\n")
        for i, h in enumerate(history):
            fh.write(f"{i},{h.binary!r},{h.count!r},{h.kl!r},{h.total!r}\n")


# ---------------------------------------------------------------------------
# gradient-check support


def fd_loss_fn(model: VaeModel, X: np.ndarray, noise: np.ndarray,
               weights: tuple[float, float, float] = (1.0, 1.0, 1.0)):
    """Build ``(loss_fn, flat)`` for :func:`routegen.nn.finite_diff_check`.

    The callable evaluates the batch-mean training loss at the current
    ``flat`` (to which the model is re-bound, so in-place perturbations are
    seen immediately) and returns the analytic gradient on the baseline
    call.

    Sweeping every parameter of the standard model means ~280k loss
    evaluations, so perturbed calls take structural shortcuts that leave
    the value intact up to float rounding far below the check tolerance:

    * layers upstream of the change reuse the baseline activations;
    * a changed weight ``W[j, k]`` touches only column ``j`` of its layer
      output, so that column is patched instead of redoing the product;
    * if the patched column is unchanged after relu (dead unit, or a
      first-layer weight whose input cell is empty in every sample), the
      loss is the baseline loss;
    * a change in the last layer stays confined to one logit column, and a
      change in the second decoder layer reaches the logits as a rank-one
      update.
    """
    X = np.asarray(X, dtype=np.float64)
    noise = np.asarray(noise, dtype=np.float64)
    wb, wc, wk = weights
    flat = pack_params(model)
    bind_params(model, flat)
    bounds = _layer_boundaries(model)
    layer_list = [layer for _, layer in model.layers()]
    starts = np.concatenate([[0], bounds[:-1]])
    state: dict = {}

    def mean_total(binary_k, count_k, kl_k) -> float:
        return float(np.mean(wb * binary_k + wc * count_k + wk * kl_k))

    def split_index(index: int) -> tuple[int, int, int | None]:
        """-> (layer, output unit j, input index k or None for a bias)."""
        li = int(np.searchsorted(bounds, index, side="right"))
        offset = index - int(starts[li])
        w_size = layer_list[li].weight.size
        if offset < w_size:
            j, k = divmod(offset, layer_list[li].in_dim)
            return li, j, k
        return li, offset - w_size, None

    def column_delta(cache_input: np.ndarray, delta: float, k: int | None) -> np.ndarray:
        return delta * cache_input[:, k] if k is not None else np.full(X.shape[0], delta)

    def loss_from_probs(p_new: np.ndarray, kl_k) -> float:
        bt = -(X * np.log(p_new) + (1.0 - X) * np.log1p(-p_new))
        binary_k = np.sum(bt, axis=1)
        count_k = (cachev("Sx") - np.sum(p_new, axis=1)) ** 2
        return mean_total(binary_k, count_k, kl_k)

    def decode_loss(z: np.ndarray, kl_k) -> float:
        t1 = relu(model.dec1.forward(z))
        t2 = relu(model.dec2.forward(t1))
        p = np.clip(sigmoid(model.out.forward(t2)), PROB_MIN, PROB_MAX)
        return loss_from_probs(p, kl_k)

    def cachev(key: str):
        return state["cache"][key]

    def loss_fn(params: np.ndarray, changed_index: int | None = None):
        if changed_index is None:
            cache = _forward(model, X, noise)
            grad = _backward(model, cache, weights)
            state["cache"] = cache
            state["base_flat"] = params.copy()
            state["base_loss"] = mean_total(cache["binary_k"], cache["count_k"],
                                            cache["kl_k"])
            return state["base_loss"], grad

        cache = state["cache"]
        delta = params[changed_index] - state["base_flat"][changed_index]
        if delta == 0.0:
            return state["base_loss"], None
        li, j, k = split_index(changed_index)

        if li == 0:  # enc1: h1 column j moves
            dv = column_delta(X, delta, k)
            if not np.any(dv):
                return state["base_loss"], None
            h1_col = relu(cache["a1"][:, j] + dv)
            if np.array_equal(h1_col, cache["h1"][:, j]):
                return state["base_loss"], None
            h1 = cache["h1"].copy()
            h1[:, j] = h1_col
            h2 = relu(model.enc2.forward(h1))
        elif li == 1:  # enc2: h2 column j moves
            dv = column_delta(cache["h1"], delta, k)
            if not np.any(dv):
                return state["base_loss"], None
            h2_col = relu(cache["a2"][:, j] + dv)
            if np.array_equal(h2_col, cache["h2"][:, j]):
                return state["base_loss"], None
            h2 = cache["h2"].copy()
            h2[:, j] = h2_col
        else:
            h2 = None

        if h2 is not None:
            mu = model.head_mu.forward(h2)
            lv = model.head_logvar.forward(h2)
            z = mu + np.exp(0.5 * lv) * noise
            kl_k = 0.5 * np.sum(mu * mu + np.exp(lv) - lv - 1.0, axis=1)
            return decode_loss(z, kl_k), None

        if li in (2, 3):  # posterior heads: one latent dim moves
            head = "mu" if li == 2 else "lv"
            patched = cache[head].copy()
            patched[:, j] = patched[:, j] + column_delta(cache["h2"], delta, k)
            mu = patched if li == 2 else cache["mu"]
            lv = patched if li == 3 else cache["lv"]
            z = cache["z"].copy()
            z[:, j] = mu[:, j] + np.exp(0.5 * lv[:, j]) * noise[:, j]
            kl_k = 0.5 * np.sum(mu * mu + np.exp(lv) - lv - 1.0, axis=1)
            return decode_loss(z, kl_k), None

        if li == 4:  # dec1: t1 column j moves
            dv = column_delta(cache["z"], delta, k)
            if not np.any(dv):
                return state["base_loss"], None
            t1_col = relu(cache["u1"][:, j] + dv)
            if np.array_equal(t1_col, cache["t1"][:, j]):
                return state["base_loss"], None
            t1 = cache["t1"].copy()
            t1[:, j] = t1_col
            t2 = relu(model.dec2.forward(t1))
            p = np.clip(sigmoid(model.out.forward(t2)), PROB_MIN, PROB_MAX)
            return loss_from_probs(p, cache["kl_k"]), None

        if li == 5:  # dec2: t2 column j moves, a rank-one logit update
            dv = column_delta(cache["t1"], delta, k)
            if not np.any(dv):
                return state["base_loss"], None
            t2_col = relu(cache["u2"][:, j] + dv)
            dcol = t2_col - cache["t2"][:, j]
            if not np.any(dcol):
                return state["base_loss"], None
            logits = cache["logits"] + dcol[:, None] * model.out.weight[:, j][None, :]
            p = np.clip(sigmoid(logits), PROB_MIN, PROB_MAX)
            return loss_from_probs(p, cache["kl_k"]), None

        # out layer: only logit column j moves
        dv = column_delta(cache["t2"], delta, k)
        if not np.any(dv):
            return state["base_loss"], None
        l_col = cache["logits"][:, j] + dv
        p_col = np.clip(sigmoid(l_col), PROB_MIN, PROB_MAX)
        x_col = X[:, j]
        bt_col = -(x_col * np.log(p_col) + (1.0 - x_col) * np.log1p(-p_col))
        binary_k = cache["binary_k"] - cache["bt"][:, j] + bt_col
        Sp = cache["Sp"] - cache["p"][:, j] + p_col
        count_k = (cache["Sx"] - Sp) ** 2
        return mean_total(binary_k, count_k, cache["kl_k"]), None

    return loss_fn, flat


# ---------------------------------------------------------------------------
# checkpoints


def save_checkpoint(model: VaeModel, path: str | Path,
                    training: dict | None = None) -> None:
    """Write the binary checkpoint and its JSON sidecar (``<path>.json``).

    Layout: magic, format version, architecture dims (all little-endian
    uint32), then every layer's weight (row-major) and bias as little-endian
    float64 in declared layer order. The sidecar repeats the architecture
    plus the training config; neither file contains timestamps, so equal
    models serialize to identical bytes.
    """
    path = Path(path)
    header = bytearray()
    header += _CKPT_MAGIC
    header += struct.pack("<I", _CKPT_VERSION)
    header += struct.pack("<II", model.input_dim, model.latent_dim)
    header += struct.pack("<I", len(model.encoder_hidden))
    for h in model.encoder_hidden:
        header += struct.pack("<I", h)
    with path.open("wb") as fh:
        fh.write(bytes(header))
        for _, layer in model.layers():
            fh.write(np.ascontiguousarray(layer.weight, dtype="<f8").tobytes())
            fh.write(np.ascontiguousarray(layer.bias, dtype="<f8").tobytes())
    sidecar = {
        "format": "routegen-vae-checkpoint",
        "format_version": _CKPT_VERSION,
        "architecture": model.architecture(),
        "training": training,
    }
    with Path(str(path) + ".json").open("w", encoding="utf-8") as fh:
        fh.write(json.dumps(sidecar, sort_keys=True, indent=2) + "\n")


def load_checkpoint(path: str | Path) -> tuple[VaeModel, dict | None]:
    """Load a checkpoint; returns the model and the sidecar dict (if present)."""
    path = Path(path)
    blob = path.read_bytes()
    if blob[:8] != _CKPT_MAGIC:
        raise DataError(f"{path}: not a routegen checkpoint (bad magic)")
    pos = 8
    (version,) = struct.unpack_from("<I", blob, pos); pos += 4
    if version != _CKPT_VERSION:
        raise DataError(f"{path}: unsupported checkpoint version {version}")
    input_dim, latent_dim = struct.unpack_from("<II", blob, pos); pos += 8
    (n_hidden,) = struct.unpack_from("<I", blob, pos); pos += 4
    if n_hidden != 2:
        raise DataError(f"{path}: expected 2 encoder hidden layers, got {n_hidden}")
    hidden = struct.unpack_from(f"<{n_hidden}I", blob, pos); pos += 4 * n_hidden

    model = VaeModel.create(seed=0, input_dim=input_dim, latent_dim=latent_dim,
                            hidden=(hidden[0], hidden[1]))
    expected = model.n_params * 8
    payload = blob[pos:]
    if len(payload) != expected:
        raise DataError(
            f"{path}: parameter payload is {len(payload)} bytes, expected {expected}"
        )
    values = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    offset = 0
    for _, layer in model.layers():
        n = layer.weight.size
        layer.weight = values[offset:offset + n].reshape(layer.weight.shape).copy()
        offset += n
        n = layer.bias.size
        layer.bias = values[offset:offset + n].copy()
        offset += n
        layer.grad_weight = np.zeros_like(layer.weight)
        layer.grad_bias = np.zeros_like(layer.bias)

    sidecar_path = Path(str(path) + ".json")
    sidecar = None
    if sidecar_path.exists():
        sidecar = json.loads(sidecar_path.read_text(encoding="utf-8"))
    return model, sidecar


def checkpoint_hash(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
