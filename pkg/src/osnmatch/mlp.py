"""Small feed-forward classifier, implemented from scratch on numpy.

Three fully connected hidden layers with ReLU, inverted dropout after
each hidden activation during training, a 2-way softmax output trained
with categorical cross-entropy and Adam, plus early stopping on
validation loss. All randomness flows from explicit seeds, so training
runs are bit-reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, EmptyDatasetError
from .profile_features import PairFeatureVector

_PROB_FLOOR = 1e-12

# class index 1 means "same individual"
POSITIVE_CLASS = 1


@dataclass(frozen=True)
class MlpConfig:
    input_dim: int
    hidden_nodes: int = 50
    n_hidden_layers: int = 3
    output_dim: int = 2
    dropout_rate: float = 0.5
    learning_rate: float = 1e-3
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    batch_size: int = 32
    max_epochs: int = 200
    early_stop_patience: int = 10
    rng_seed: int = 0

    def __post_init__(self):
        if self.input_dim < 1 or self.hidden_nodes < 1 or self.n_hidden_layers < 1:
            raise ValueError("layer dimensions must be positive")
        if self.output_dim != 2:
            raise ValueError("the classifier is binary: output_dim must be 2")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")
        if self.batch_size < 1 or self.max_epochs < 1:
            raise ValueError("batch_size and max_epochs must be positive")
        if self.early_stop_patience < 0:
            raise ValueError("early_stop_patience must be >= 0")

    @property
    def layer_dims(self) -> list[tuple[int, int]]:
        dims = (
            [self.input_dim]
            + [self.hidden_nodes] * self.n_hidden_layers
            + [self.output_dim]
        )
        return list(zip(dims[:-1], dims[1:]))


@dataclass
class MlpModel:
    config: MlpConfig
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    adam_m_w: list[np.ndarray] = field(default_factory=list)
    adam_v_w: list[np.ndarray] = field(default_factory=list)
    adam_m_b: list[np.ndarray] = field(default_factory=list)
    adam_v_b: list[np.ndarray] = field(default_factory=list)
    adam_t: int = 0


@dataclass
class Prediction:
    """Softmax output for one pair: [p(different), p(same)]."""

    probabilities: np.ndarray
    predicted_same: bool


@dataclass
class EpochStats:
    epoch: int
    train_loss: float
    val_loss: float


def init_model(cfg: MlpConfig, rng: np.random.Generator | None = None) -> MlpModel:
    """Weights uniform in ±sqrt(6/fan_in) (He-style bound for ReLU),
    biases zero, Adam accumulators zero."""
    if rng is None:
        rng = np.random.default_rng(cfg.rng_seed)
    weights, biases = [], []
    for fan_in, fan_out in cfg.layer_dims:
        bound = np.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    model = MlpModel(config=cfg, weights=weights, biases=biases)
    _reset_adam(model)
    return model


def _reset_adam(model: MlpModel) -> None:
    model.adam_m_w = [np.zeros_like(w) for w in model.weights]
    model.adam_v_w = [np.zeros_like(w) for w in model.weights]
    model.adam_m_b = [np.zeros_like(b) for b in model.biases]
    model.adam_v_b = [np.zeros_like(b) for b in model.biases]
    model.adam_t = 0


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _forward_batch(
    model: MlpModel,
    x: np.ndarray,
    training: bool = False,
    rng: np.random.Generator | None = None,
    replay_masks: list[np.ndarray] | None = None,
) -> tuple[np.ndarray, dict]:
    """Run a (n, input_dim) batch; returns (softmax probabilities, cache).

    With ``training`` each hidden activation is masked by inverted dropout
    (scaled by 1/keep so the expectation matches inference). ``replay_masks``
    reuses previously drawn masks, which finite-difference checks need.
    """
    cfg = model.config
    if x.ndim != 2 or x.shape[1] != cfg.input_dim:
        raise DimensionMismatchError(
            f"expected (*, {cfg.input_dim}) inputs, got {x.shape}"
        )
    rate = cfg.dropout_rate if training else 0.0
    activations = [x]
    pre_acts = []
    masks: list[np.ndarray] = []
    a = x
    n_layers = len(model.weights)
    for layer in range(n_layers - 1):
        z = a @ model.weights[layer] + model.biases[layer]
        pre_acts.append(z)
        a = np.maximum(z, 0.0)
        if rate > 0.0:
            if replay_masks is not None:
                mask = replay_masks[layer]
            else:
                if rng is None:
                    raise ValueError("training-mode forward with dropout needs an rng")
                mask = (rng.random(a.shape) >= rate) / (1.0 - rate)
            a = a * mask
            masks.append(mask)
        activations.append(a)
    z_out = a @ model.weights[-1] + model.biases[-1]
    pre_acts.append(z_out)
    probs = _softmax(z_out)
    cache = {
        "activations": activations,
        "pre_activations": pre_acts,
        "masks": masks,
        "probs": probs,
    }
    return probs, cache


def forward(
    model: MlpModel,
    x: np.ndarray,
    training: bool = False,
    rng: np.random.Generator | None = None,
) -> tuple[Prediction, dict]:
    """Single-example forward pass."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatchError(f"expected a 1-d input, got shape {x.shape}")
    probs, cache = _forward_batch(model, x[None, :], training=training, rng=rng)
    p = probs[0]
    return Prediction(probabilities=p, predicted_same=bool(p[POSITIVE_CLASS] >= 0.5)), cache


def loss_cce(prediction: Prediction | np.ndarray, label: bool) -> float:
    """Categorical cross-entropy: -log p of the true class, floored at 1e-12."""
    probs = (
        prediction.probabilities
        if isinstance(prediction, Prediction)
        else np.asarray(prediction)
    )
    p = probs[POSITIVE_CLASS if label else 1 - POSITIVE_CLASS]
    return float(-np.log(max(p, _PROB_FLOOR)))


def _batch_cce(probs: np.ndarray, labels: np.ndarray) -> float:
    idx = np.where(labels, POSITIVE_CLASS, 1 - POSITIVE_CLASS)
    p = probs[np.arange(len(labels)), idx]
    return float(-np.log(np.maximum(p, _PROB_FLOOR)).mean())


def backward(model: MlpModel, cache: dict, labels) -> dict:
    """Gradients of the mean cross-entropy over the cached batch, reusing
    the cached dropout masks. Shapes mirror the parameters."""
    labels = np.atleast_1d(np.asarray(labels, dtype=bool))
    probs = cache["probs"]
    n = probs.shape[0]
    if len(labels) != n:
        raise DimensionMismatchError(f"{len(labels)} labels for batch of {n}")
    onehot = np.zeros_like(probs)
    onehot[np.arange(n), np.where(labels, POSITIVE_CLASS, 1 - POSITIVE_CLASS)] = 1.0
    dz = (probs - onehot) / n
    grads_w: list[np.ndarray] = [None] * len(model.weights)
    grads_b: list[np.ndarray] = [None] * len(model.biases)
    masks = cache["masks"]
    for layer in reversed(range(len(model.weights))):
        a_prev = cache["activations"][layer]
        grads_w[layer] = a_prev.T @ dz
        grads_b[layer] = dz.sum(axis=0)
        if layer == 0:
            break
        da = dz @ model.weights[layer].T
        if masks:
            da = da * masks[layer - 1]
        dz = da * (cache["pre_activations"][layer - 1] > 0.0)
    return {"weights": grads_w, "biases": grads_b}


def adam_step(model: MlpModel, grads: dict) -> MlpModel:
    """One bias-corrected Adam update, in place; returns the model."""
    cfg = model.config
    for g, w in zip(grads["weights"], model.weights):
        if g.shape != w.shape:
            raise DimensionMismatchError(f"gradient {g.shape} for weight {w.shape}")
    model.adam_t += 1
    t = model.adam_t
    b1, b2, eps, lr = cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps, cfg.learning_rate
    for params, grad_list, m_list, v_list in (
        (model.weights, grads["weights"], model.adam_m_w, model.adam_v_w),
        (model.biases, grads["biases"], model.adam_m_b, model.adam_v_b),
    ):
        for i, g in enumerate(grad_list):
            m_list[i] = b1 * m_list[i] + (1.0 - b1) * g
            v_list[i] = b2 * v_list[i] + (1.0 - b2) * g * g
            m_hat = m_list[i] / (1.0 - b1**t)
            v_hat = v_list[i] / (1.0 - b2**t)
            params[i] = params[i] - lr * m_hat / (np.sqrt(v_hat) + eps)
    return model


def _as_arrays(vectors: list[PairFeatureVector], input_dim: int):
    xs = np.empty((len(vectors), input_dim))
    ys = np.empty(len(vectors), dtype=bool)
    for i, vec in enumerate(vectors):
        if len(vec.values) != input_dim:
            raise DimensionMismatchError(
                f"vector {i} has {len(vec.values)} features, expected {input_dim}"
            )
        if vec.label is None:
            raise ValueError(f"vector {i} is unlabeled")
        xs[i] = vec.values
        ys[i] = vec.label
    return xs, ys


def train(
    cfg: MlpConfig,
    train_set: list[PairFeatureVector],
    val_set: list[PairFeatureVector],
) -> tuple[MlpModel, list[EpochStats]]:
    """Mini-batch training with seeded shuffling and early stopping.

    Stops once validation loss has not improved for more than
    ``early_stop_patience`` consecutive epochs (or at ``max_epochs``) and
    returns the parameters from the best-validation epoch.
    """
    if not train_set or not val_set:
        raise EmptyDatasetError("train and validation sets must be nonempty")
    x_train, y_train = _as_arrays(train_set, cfg.input_dim)
    x_val, y_val = _as_arrays(val_set, cfg.input_dim)
    rng = np.random.default_rng(cfg.rng_seed)
    model = init_model(cfg, rng=rng)

    best_val = np.inf
    best_params: tuple[list[np.ndarray], list[np.ndarray]] | None = None
    stale = 0
    history: list[EpochStats] = []
    n = len(x_train)
    for epoch in range(1, cfg.max_epochs + 1):
        order = rng.permutation(n)
        batch_losses = []
        for start in range(0, n, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            probs, cache = _forward_batch(model, x_train[idx], training=True, rng=rng)
            batch_losses.append(_batch_cce(probs, y_train[idx]))
            grads = backward(model, cache, y_train[idx])
            adam_step(model, grads)
        val_probs, _ = _forward_batch(model, x_val, training=False)
        val_loss = _batch_cce(val_probs, y_val)
        history.append(
            EpochStats(epoch=epoch, train_loss=float(np.mean(batch_losses)), val_loss=val_loss)
        )
        if val_loss < best_val:
            best_val = val_loss
            best_params = ([w.copy() for w in model.weights], [b.copy() for b in model.biases])
            stale = 0
        else:
            stale += 1
            if stale > cfg.early_stop_patience:
                break
    assert best_params is not None
    best = MlpModel(config=cfg, weights=best_params[0], biases=best_params[1])
    _reset_adam(best)
    return best, history


def predict(model: MlpModel, x: np.ndarray) -> Prediction:
    """Inference-mode forward pass (dropout disabled)."""
    pred, _ = forward(model, x, training=False)
    return pred


def predict_batch(model: MlpModel, xs: np.ndarray) -> list[Prediction]:
    probs, _ = _forward_batch(model, np.asarray(xs, dtype=np.float64), training=False)
    return [
        Prediction(probabilities=p, predicted_same=bool(p[POSITIVE_CLASS] >= 0.5))
        for p in probs
    ]


# On-disk model format "osnmatch-mlp/1": one UTF-8 JSON header line holding
# the config and parameter shapes, then the parameters as raw little-endian
# float64, row-major, ordered W0, b0, W1, b1, ...
FORMAT_TAG = "osnmatch-mlp/1"


def save_model(model: MlpModel, path: str) -> None:
    header = {
        "format": FORMAT_TAG,
        "config": {k: getattr(model.config, k) for k in MlpConfig.__dataclass_fields__},
        "shapes": [list(a.shape) for pair in zip(model.weights, model.biases) for a in pair],
    }
    with open(path, "wb") as fh:
        fh.write(
            json.dumps(
                header, sort_keys=True, default=lambda o: o.item()
            ).encode("utf-8")
        )
        fh.write(b"\n")
        for w, b in zip(model.weights, model.biases):
            fh.write(np.ascontiguousarray(w, dtype="<f8").tobytes())
            fh.write(np.ascontiguousarray(b, dtype="<f8").tobytes())


def load_model(path: str) -> MlpModel:
    """Inverse of save_model; Adam state starts zeroed."""
    with open(path, "rb") as fh:
        header_line = fh.readline()
        header = json.loads(header_line.decode("utf-8"))
        if header.get("format") != FORMAT_TAG:
            raise ValueError(f"unsupported model format in {path}")
        cfg = MlpConfig(**header["config"])
        weights, biases = [], []
        for shape in header["shapes"]:
            count = int(np.prod(shape))
            buf = fh.read(count * 8)
            if len(buf) != count * 8:
                raise ValueError(f"truncated parameter data in {path}")
            arr = np.frombuffer(buf, dtype="<f8").reshape(shape).copy()
            if len(shape) == 1:
                biases.append(arr)
            else:
                weights.append(arr)
    model = MlpModel(config=cfg, weights=weights, biases=biases)
    _reset_adam(model)
    return model
