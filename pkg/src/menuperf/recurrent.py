"""Windowed recurrent regressor for (CE, PT), written from scratch on numpy.

One hidden LSTM layer reads a window of up to 15 feature vectors in
chronological order; the final hidden state is projected to the two outputs.
Training minimizes the mean over samples of (ce_err^2 + pt_err^2) on
z-scored targets with Adam and backpropagation through time; dropout acts on
the final hidden state in train mode only (inverted scaling, so inference
needs no rescale).

Windows shorter than the configured length are not padded: the recurrence
simply starts at the first task of the window. Internally, batches
right-align windows and mask the leading steps, which is arithmetically
identical to starting late because the initial state is zero.

Weight files are binary: a magic line, a JSON header (dims, window, block
order, target standardization stats, payload size), then the parameter
blocks as little-endian float64 in the documented order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ModelError",
    "TrainingDiverged",
    "WeightFormatError",
    "TrainConfig",
    "ModelWeights",
    "Prediction",
    "init_weights",
    "forward",
    "train",
    "predict_session",
    "gradient_check",
    "save_weights",
    "load_weights",
]

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

WEIGHTS_MAGIC = "#menuperf-weights v1"

# serialization order of the parameter blocks inside a weight file
PARAM_BLOCKS = ("w_i", "w_f", "w_o", "w_c", "b_i", "b_f", "b_o", "b_c", "w_y", "b_y")


class ModelError(ValueError):
    pass


class TrainingDiverged(ModelError):
    def __init__(self, epoch: int):
        super().__init__(f"training loss became non-finite at epoch {epoch}")
        self.epoch = epoch


class WeightFormatError(ModelError):
    pass


@dataclass
class TrainConfig:
    input_dim: int = 523
    hidden_dim: int = 64
    output_dim: int = 2
    window: int = 15
    dropout_rate: float = 0.3
    learning_rate: float = 0.00002
    epochs: int = 700
    batch_size: int = 16
    seed: int = 0

    def __post_init__(self):
        if min(self.input_dim, self.hidden_dim, self.output_dim, self.window) < 1:
            raise ModelError("dimensions and window must be positive")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ModelError("dropout_rate must lie in [0, 1)")
        if self.learning_rate <= 0 or self.batch_size < 1 or self.epochs < 0:
            raise ModelError("learning_rate must be positive, batch_size >= 1, epochs >= 0")


@dataclass
class ModelWeights:
    """Gate weights stacked [input, forget, output, candidate] plus output head.

    `gate_w` has shape (4*hidden, input+hidden) and `gate_b` (4*hidden,).
    Per-gate views are exposed for inspection and serialization. Target
    standardization stats live with the weights so predictions always come
    back in original units.
    """

    input_dim: int
    hidden_dim: int
    output_dim: int
    window: int
    gate_w: np.ndarray
    gate_b: np.ndarray
    w_y: np.ndarray
    b_y: np.ndarray
    target_mean: np.ndarray = field(default_factory=lambda: np.zeros(2))
    target_std: np.ndarray = field(default_factory=lambda: np.ones(2))

    def __post_init__(self):
        h, d, o = self.hidden_dim, self.input_dim, self.output_dim
        if self.gate_w.shape != (4 * h, d + h) or self.gate_b.shape != (4 * h,):
            raise ModelError("gate parameter shapes inconsistent with config")
        if self.w_y.shape != (o, h) or self.b_y.shape != (o,):
            raise ModelError("output head shapes inconsistent with config")
        if self.target_mean.shape != (o,) or self.target_std.shape != (o,):
            raise ModelError("target stats must have one entry per output")

    def _gate(self, k: int) -> np.ndarray:
        h = self.hidden_dim
        return self.gate_w[k * h : (k + 1) * h]

    @property
    def w_i(self) -> np.ndarray:
        return self._gate(0)

    @property
    def w_f(self) -> np.ndarray:
        return self._gate(1)

    @property
    def w_o(self) -> np.ndarray:
        return self._gate(2)

    @property
    def w_c(self) -> np.ndarray:
        return self._gate(3)

    @property
    def b_i(self) -> np.ndarray:
        return self.gate_b[0 : self.hidden_dim]

    @property
    def b_f(self) -> np.ndarray:
        return self.gate_b[self.hidden_dim : 2 * self.hidden_dim]

    @property
    def b_o(self) -> np.ndarray:
        return self.gate_b[2 * self.hidden_dim : 3 * self.hidden_dim]

    @property
    def b_c(self) -> np.ndarray:
        return self.gate_b[3 * self.hidden_dim : 4 * self.hidden_dim]

    def params(self) -> list[np.ndarray]:
        """Trainable arrays, in Adam update order."""
        return [self.gate_w, self.gate_b, self.w_y, self.b_y]

    def copy(self) -> "ModelWeights":
        return ModelWeights(
            self.input_dim,
            self.hidden_dim,
            self.output_dim,
            self.window,
            self.gate_w.copy(),
            self.gate_b.copy(),
            self.w_y.copy(),
            self.b_y.copy(),
            self.target_mean.copy(),
            self.target_std.copy(),
        )


@dataclass
class Prediction:
    ce: float
    pt: float


def init_weights(config: TrainConfig, rng: np.random.Generator | None = None) -> ModelWeights:
    """Uniform +-1/sqrt(fan-in) initialization, forget-gate bias raised to +1."""
    if rng is None:
        rng = np.random.Generator(np.random.PCG64(config.seed))
    d, h, o = config.input_dim, config.hidden_dim, config.output_dim
    bound_g = 1.0 / np.sqrt(d + h)
    bound_y = 1.0 / np.sqrt(h)
    gate_w = rng.uniform(-bound_g, bound_g, size=(4 * h, d + h))
    gate_b = np.zeros(4 * h)
    gate_b[h : 2 * h] = 1.0  # forget gate open at start
    w_y = rng.uniform(-bound_y, bound_y, size=(o, h))
    b_y = np.zeros(o)
    return ModelWeights(d, h, o, config.window, gate_w, gate_b, w_y, b_y)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _recur_batch(weights: ModelWeights, xs: np.ndarray, mask: np.ndarray, keep_cache: bool):
    """Run the gated recurrence over a right-aligned batch.

    xs: (B, T, D) with masked leading steps zero-filled; mask: (B, T).
    Returns the final hidden state (B, H) and, when requested, the cache
    needed for backpropagation. The input-side transform of every timestep is
    hoisted into one matrix product; only the hidden-side product stays in
    the loop.
    """
    B, T, D = xs.shape
    h_dim = weights.hidden_dim
    w_x = weights.gate_w[:, :D]
    w_h = weights.gate_w[:, D:]
    x_acts = (xs.reshape(B * T, D) @ w_x.T).reshape(B, T, 4 * h_dim) + weights.gate_b
    h = np.zeros((B, h_dim))
    c = np.zeros((B, h_dim))
    hs_prev = np.empty((B, T, h_dim)) if keep_cache else None
    steps = []
    for t in range(T):
        m = mask[:, t : t + 1]
        acts = x_acts[:, t, :] + h @ w_h.T
        gates = _sigmoid(acts[:, : 3 * h_dim])
        i = gates[:, 0 * h_dim : 1 * h_dim]
        f = gates[:, 1 * h_dim : 2 * h_dim]
        o = gates[:, 2 * h_dim : 3 * h_dim]
        g = np.tanh(acts[:, 3 * h_dim : 4 * h_dim])
        c_new = f * c + i * g
        tc = np.tanh(c_new)
        h_new = o * tc
        if keep_cache:
            hs_prev[:, t] = h
            steps.append((i, f, o, g, c, tc, m))
        h = m * h_new + (1.0 - m) * h
        c = m * c_new + (1.0 - m) * c
    return h, (xs, hs_prev, steps)


def _backprop_batch(weights: ModelWeights, cache, d_h: np.ndarray, grads: dict) -> None:
    """Accumulate gate gradients given d(loss)/d(final hidden state).

    Per-step work only propagates through the hidden-side weights; the
    input- and hidden-side weight gradients are formed afterwards with two
    matrix products over the stacked per-step activations.
    """
    xs, hs_prev, steps = cache
    B, T, D = xs.shape
    h_dim = weights.hidden_dim
    w_h = weights.gate_w[:, D:]
    d_acts = np.zeros((B, T, 4 * h_dim))
    d_c = np.zeros_like(d_h)
    for t in reversed(range(T)):
        i, f, o, g, c_prev, tc, m = steps[t]
        dh_new = d_h * m
        dh_prev = d_h * (1.0 - m)
        dc_new = d_c * m
        dc_prev_direct = d_c * (1.0 - m)

        do = dh_new * tc
        dc_new = dc_new + dh_new * o * (1.0 - tc**2)
        df = dc_new * c_prev
        di = dc_new * g
        dg = dc_new * i
        dc_prev = dc_new * f + dc_prev_direct

        da = d_acts[:, t, :]
        da[:, 0 * h_dim : 1 * h_dim] = di * i * (1.0 - i)
        da[:, 1 * h_dim : 2 * h_dim] = df * f * (1.0 - f)
        da[:, 2 * h_dim : 3 * h_dim] = do * o * (1.0 - o)
        da[:, 3 * h_dim : 4 * h_dim] = dg * (1.0 - g**2)
        d_h = da @ w_h + dh_prev
        d_c = dc_prev
    da_flat = d_acts.reshape(B * T, 4 * h_dim)
    grads["gate_w"][:, :D] += da_flat.T @ xs.reshape(B * T, D)
    grads["gate_w"][:, D:] += da_flat.T @ hs_prev.reshape(B * T, h_dim)
    grads["gate_b"] += da_flat.sum(axis=0)


def _window_batch(windows: list[np.ndarray], window_len: int, input_dim: int):
    """Right-align variable-length windows into (B, T, D) plus a step mask."""
    B = len(windows)
    T = window_len
    xs = np.zeros((B, T, input_dim))
    mask = np.zeros((B, T))
    for b, w in enumerate(windows):
        w = np.asarray(w, dtype=float)
        if w.ndim == 1:
            w = w[None, :]
        if w.shape[0] > T or w.shape[0] < 1:
            raise ModelError(f"window length {w.shape[0]} outside [1, {T}]")
        if w.shape[1] != input_dim:
            raise ModelError(f"feature vectors have {w.shape[1]} values, expected {input_dim}")
        xs[b, T - w.shape[0] :, :] = w
        mask[b, T - w.shape[0] :] = 1.0
    return xs, mask


def forward(
    window,
    weights: ModelWeights,
    mode: str = "infer",
    seed: int = 0,
    dropout_rate: float = 0.3,
) -> Prediction:
    """Predict (CE, PT) from one window of feature vectors.

    `infer` mode is deterministic; `train` mode applies an inverted dropout
    mask to the final hidden state, drawn from `seed`.
    """
    if mode not in ("infer", "train"):
        raise ModelError(f"mode must be 'infer' or 'train', got {mode!r}")
    xs, mask = _window_batch([np.asarray(window)], weights.window, weights.input_dim)
    h, _ = _recur_batch(weights, xs, mask, keep_cache=False)
    if mode == "train":
        rng = np.random.Generator(np.random.PCG64(seed))
        h = h * _dropout_mask(rng, h.shape, dropout_rate)
    y = h @ weights.w_y.T + weights.b_y
    y = y[0] * weights.target_std + weights.target_mean
    return Prediction(ce=float(y[0]), pt=float(y[1]))


def _dropout_mask(rng: np.random.Generator, shape, rate: float) -> np.ndarray:
    if rate <= 0.0:
        return np.ones(shape)
    return (rng.random(shape) >= rate) / (1.0 - rate)


def train(dataset, config: TrainConfig):
    """Fit weights with Adam on MSE over z-scored targets.

    `dataset` is a sequence of (window, ce, pt) with window a list or array of
    feature vectors, newest last. Returns (weights, per-epoch loss history).
    Raises TrainingDiverged with the epoch index if the loss leaves the
    finite range.
    """
    if not dataset:
        raise ModelError("dataset is empty")
    targets = np.array([[float(ce), float(pt)] for _, ce, pt in dataset])
    if not np.all(np.isfinite(targets)):
        raise ModelError("targets must be finite")
    rng = np.random.Generator(np.random.PCG64(config.seed))
    weights = init_weights(config, rng)
    weights.target_mean = targets.mean(axis=0)
    std = targets.std(axis=0)
    weights.target_std = np.where(std > 0, std, 1.0)
    y_all = (targets - weights.target_mean) / weights.target_std

    xs_all, mask_all = _window_batch(
        [w for w, _, _ in dataset], config.window, config.input_dim
    )
    n = len(dataset)

    params = weights.params()
    adam_m = [np.zeros_like(p) for p in params]
    adam_v = [np.zeros_like(p) for p in params]
    step = 0
    history: list[float] = []

    for epoch in range(config.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            xs, mask, y = xs_all[idx], mask_all[idx], y_all[idx]
            B = len(idx)

            h, cache = _recur_batch(weights, xs, mask, keep_cache=True)
            drop = _dropout_mask(rng, h.shape, config.dropout_rate)
            h_drop = h * drop
            pred = h_drop @ weights.w_y.T + weights.b_y
            err = pred - y
            loss = float(np.sum(err**2) / B)
            epoch_loss += loss * B

            d_pred = 2.0 * err / B
            grads = {
                "gate_w": np.zeros_like(weights.gate_w),
                "gate_b": np.zeros_like(weights.gate_b),
                "w_y": d_pred.T @ h_drop,
                "b_y": d_pred.sum(axis=0),
            }
            d_h = (d_pred @ weights.w_y) * drop
            _backprop_batch(weights, cache, d_h, grads)

            step += 1
            grad_list = [grads["gate_w"], grads["gate_b"], grads["w_y"], grads["b_y"]]
            for p, g, m_, v_ in zip(params, grad_list, adam_m, adam_v):
                m_ *= ADAM_BETA1
                m_ += (1 - ADAM_BETA1) * g
                v_ *= ADAM_BETA2
                v_ += (1 - ADAM_BETA2) * g**2
                m_hat = m_ / (1 - ADAM_BETA1**step)
                v_hat = v_ / (1 - ADAM_BETA2**step)
                p -= config.learning_rate * m_hat / (np.sqrt(v_hat) + ADAM_EPS)

        mean_loss = epoch_loss / n
        if not np.isfinite(mean_loss):
            raise TrainingDiverged(epoch)
        history.append(mean_loss)
    return weights, history


def predict_session(features, weights: ModelWeights) -> list[Prediction]:
    """One prediction per task; task i sees the window features[max(0, i-w+1)..i]."""
    features = [np.asarray(f, dtype=float) for f in features]
    if not features:
        raise ModelError("feature list is empty")
    out = []
    for i in range(len(features)):
        lo = max(0, i - weights.window + 1)
        out.append(forward(features[lo : i + 1], weights, mode="infer"))
    return out


def _loss_and_grads(weights: ModelWeights, window: np.ndarray, target: np.ndarray):
    """Single-sample loss (no dropout) and gradients, for gradient checking."""
    xs, mask = _window_batch([window], weights.window, weights.input_dim)
    h, cache = _recur_batch(weights, xs, mask, keep_cache=True)
    pred = h @ weights.w_y.T + weights.b_y
    err = pred - target[None, :]
    loss = float(np.sum(err**2))
    d_pred = 2.0 * err
    grads = {
        "gate_w": np.zeros_like(weights.gate_w),
        "gate_b": np.zeros_like(weights.gate_b),
        "w_y": d_pred.T @ h,
        "b_y": d_pred.sum(axis=0),
    }
    _backprop_batch(weights, cache, d_pred @ weights.w_y, grads)
    return loss, [grads["gate_w"], grads["gate_b"], grads["w_y"], grads["b_y"]]


def gradient_check(
    config: TrainConfig,
    sample=None,
    epsilon: float = 1e-5,
    seed: int = 0,
) -> float:
    """Max relative error between analytic and central finite-difference gradients.

    Checks every entry of every parameter block on one sample; intended for
    small configurations (dropout is ignored).
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    weights = init_weights(config, rng)
    if sample is None:
        length = int(rng.integers(1, config.window + 1))
        window = rng.standard_normal((length, config.input_dim))
        target = rng.standard_normal(config.output_dim)
    else:
        window, target = np.asarray(sample[0], dtype=float), np.asarray(sample[1], dtype=float)

    _, analytic = _loss_and_grads(weights, window, target)
    worst = 0.0
    for p, ga in zip(weights.params(), analytic):
        flat = p.reshape(-1)
        ga_flat = ga.reshape(-1)
        for k in range(flat.size):
            orig = flat[k]
            flat[k] = orig + epsilon
            lo_plus, _ = _loss_and_grads(weights, window, target)
            flat[k] = orig - epsilon
            lo_minus, _ = _loss_and_grads(weights, window, target)
            flat[k] = orig
            gn = (lo_plus - lo_minus) / (2 * epsilon)
            denom = max(abs(ga_flat[k]) + abs(gn), 1e-8)
            worst = max(worst, abs(ga_flat[k] - gn) / denom)
    return worst


def save_weights(weights: ModelWeights, path) -> None:
    """Write the versioned binary weight file (see module docstring)."""
    blocks = [getattr(weights, name) for name in PARAM_BLOCKS]
    blocks += [weights.target_mean, weights.target_std]
    payload = b"".join(np.ascontiguousarray(b, dtype="<f8").tobytes() for b in blocks)
    header = {
        "input_dim": weights.input_dim,
        "hidden_dim": weights.hidden_dim,
        "output_dim": weights.output_dim,
        "window": weights.window,
        "blocks": list(PARAM_BLOCKS) + ["target_mean", "target_std"],
        "payload_bytes": len(payload),
    }
    with open(path, "wb") as fh:
        fh.write((WEIGHTS_MAGIC + "\n").encode("ascii"))
        fh.write((json.dumps(header) + "\n").encode("ascii"))
        fh.write(payload)


def load_weights(path, expect: TrainConfig | None = None) -> ModelWeights:
    """Read a weight file; refuses wrong magic, truncation, or mismatched dims."""
    with open(path, "rb") as fh:
        magic = fh.readline().decode("ascii", errors="replace").rstrip("\n")
        if magic != WEIGHTS_MAGIC:
            raise WeightFormatError(f"not a weight file (magic {magic!r})")
        try:
            header = json.loads(fh.readline().decode("ascii"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise WeightFormatError(f"corrupted weight header: {exc}") from exc
        payload = fh.read()
    if len(payload) != header.get("payload_bytes"):
        raise WeightFormatError(
            f"corrupted weight file: expected {header.get('payload_bytes')} payload bytes, "
            f"got {len(payload)}"
        )
    d, h, o, w = (header[k] for k in ("input_dim", "hidden_dim", "output_dim", "window"))
    if expect is not None and (d, h, o, w) != (
        expect.input_dim,
        expect.hidden_dim,
        expect.output_dim,
        expect.window,
    ):
        raise WeightFormatError(
            f"weight file config ({d}/{h}/{o}, window {w}) does not match expected "
            f"({expect.input_dim}/{expect.hidden_dim}/{expect.output_dim}, window {expect.window})"
        )
    shapes = {
        "w_i": (h, d + h),
        "w_f": (h, d + h),
        "w_o": (h, d + h),
        "w_c": (h, d + h),
        "b_i": (h,),
        "b_f": (h,),
        "b_o": (h,),
        "b_c": (h,),
        "w_y": (o, h),
        "b_y": (o,),
        "target_mean": (o,),
        "target_std": (o,),
    }
    arrays = {}
    offset = 0
    for name in header["blocks"]:
        shape = shapes[name]
        count = int(np.prod(shape))
        block = np.frombuffer(payload, dtype="<f8", count=count, offset=offset)
        arrays[name] = block.reshape(shape).astype(float)
        offset += count * 8
    gate_w = np.vstack([arrays["w_i"], arrays["w_f"], arrays["w_o"], arrays["w_c"]])
    gate_b = np.concatenate([arrays["b_i"], arrays["b_f"], arrays["b_o"], arrays["b_c"]])
    return ModelWeights(
        d, h, o, w, gate_w, gate_b, arrays["w_y"], arrays["b_y"],
        arrays["target_mean"], arrays["target_std"],
    )
