"""One-hidden-layer perceptron with manual backpropagation."""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.exceptions import ConfigError, DivergenceError, EmptyMask, PolicyError


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def relu_grad(x: np.ndarray) -> np.ndarray:
    return np.where(x > 0, 1.0, 0.0)


def sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def log_sigmoid(x: np.ndarray) -> np.ndarray:
    """log(sigmoid(x)) without overflow."""
    return -np.logaddexp(0.0, -x)


def masked_softmax(logits: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Softmax over the unmasked entries; masked entries are exactly 0."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise EmptyMask("No legal option to choose from")
    logits = np.asarray(logits, dtype=np.float64)
    shifted = logits - logits[mask].max()
    weights = np.where(mask, np.exp(np.where(mask, shifted, 0.0)), 0.0)
    return weights / weights.sum()


@dataclass
class ForwardTrace:
    """Activations remembered by forward for one backward pass."""

    x: np.ndarray
    z1: np.ndarray
    h: np.ndarray
    out: np.ndarray
    consumed: bool = False


@dataclass
class Gradients:
    """Parameter gradients in the layer order of Mlp."""

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    def arrays(self) -> List[np.ndarray]:
        return [self.w1, self.b1, self.w2, self.b2]


class Mlp:
    """out = W2 relu(W1 x + b1) + b2."""

    def __init__(self, w1: np.ndarray, b1: np.ndarray, w2: np.ndarray, b2: np.ndarray):
        hidden_dim, input_dim = w1.shape
        output_dim = w2.shape[0]
        if b1.shape != (hidden_dim,) or w2.shape != (output_dim, hidden_dim) or b2.shape != (output_dim,):
            raise ConfigError(
                "Inconsistent layer shapes",
                {"w1": w1.shape, "b1": b1.shape, "w2": w2.shape, "b2": b2.shape},
            )
        self.w1 = np.asarray(w1, dtype=np.float64)
        self.b1 = np.asarray(b1, dtype=np.float64)
        self.w2 = np.asarray(w2, dtype=np.float64)
        self.b2 = np.asarray(b2, dtype=np.float64)

    @classmethod
    def init(cls, input_dim: int, hidden_dim: int, output_dim: int, seed: Optional[int] = None) -> "Mlp":
        """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases."""
        for name, value in (("input_dim", input_dim), ("hidden_dim", hidden_dim), ("output_dim", output_dim)):
            if value < 1:
                raise ConfigError(f"{name} must be positive", {name: value})
        rng = np.random.default_rng(seed)
        bound1 = 1.0 / np.sqrt(input_dim)
        bound2 = 1.0 / np.sqrt(hidden_dim)
        return cls(
            rng.uniform(-bound1, bound1, size=(hidden_dim, input_dim)),
            np.zeros(hidden_dim),
            rng.uniform(-bound2, bound2, size=(output_dim, hidden_dim)),
            np.zeros(output_dim),
        )

    @property
    def dims(self) -> Tuple[int, int, int]:
        return self.input_dim, self.hidden_dim, self.output_dim

    @property
    def input_dim(self) -> int:
        return self.w1.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.w1.shape[0]

    @property
    def output_dim(self) -> int:
        return self.w2.shape[0]

    @property
    def parameter_count(self) -> int:
        return sum(a.size for a in self.arrays())

    def arrays(self) -> List[np.ndarray]:
        return [self.w1, self.b1, self.w2, self.b2]

    def copy(self) -> "Mlp":
        return Mlp(*(a.copy() for a in self.arrays()))

    def forward(self, x: Sequence[float]) -> Tuple[np.ndarray, ForwardTrace]:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.input_dim,):
            raise ConfigError(
                f"Expected input of length {self.input_dim}, got {x.shape}",
                {"input_dim": self.input_dim},
            )
        z1 = self.w1 @ x + self.b1
        h = relu(z1)
        out = self.w2 @ h + self.b2
        return out, ForwardTrace(x=x, z1=z1, h=h, out=out)

    def predict(self, x: Sequence[float]) -> np.ndarray:
        return self.forward(x)[0]

    def backward(self, trace: ForwardTrace, output_gradient: Sequence[float]) -> Gradients:
        """Reverse-mode gradients of ``output_gradient . out`` w.r.t. parameters."""
        if trace.consumed:
            raise PolicyError("Forward trace already consumed")
        trace.consumed = True
        g = np.asarray(output_gradient, dtype=np.float64)
        dw2 = np.outer(g, trace.h)
        db2 = g.copy()
        dh = self.w2.T @ g
        dz1 = relu_grad(trace.z1) * dh
        dw1 = np.outer(dz1, trace.x)
        db1 = dz1
        return Gradients(w1=dw1, b1=db1, w2=dw2, b2=db2)

    def apply_gradients(self, grads: Gradients, step_size: float) -> None:
        """Ascent step: parameters += step_size * grads."""
        if step_size == 0:
            return
        for param, grad in zip(self.arrays(), grads.arrays()):
            param += step_size * grad
        if not all(np.isfinite(a).all() for a in self.arrays()):
            raise DivergenceError("Network parameters became non-finite", {"step_size": step_size})

    # ===== WEIGHT FILE =====

    def to_text(self) -> str:
        """``dims in hid out`` then one line of floats per array (W1, b1, W2, b2)."""
        lines = ["dims {} {} {}".format(*self.dims)]
        for array in self.arrays():
            lines.append(" ".join("%.17g" % v for v in array.ravel()))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tokens(cls, dims: Tuple[int, int, int], values: Sequence[float]) -> "Mlp":
        input_dim, hidden_dim, output_dim = dims
        sizes = [hidden_dim * input_dim, hidden_dim, output_dim * hidden_dim, output_dim]
        if len(values) != sum(sizes):
            raise ConfigError(
                f"Expected {sum(sizes)} weights, got {len(values)}", {"dims": list(dims)}
            )
        flat = np.asarray(values, dtype=np.float64)
        parts = np.split(flat, np.cumsum(sizes)[:-1])
        return cls(
            parts[0].reshape(hidden_dim, input_dim),
            parts[1],
            parts[2].reshape(output_dim, hidden_dim),
            parts[3],
        )
