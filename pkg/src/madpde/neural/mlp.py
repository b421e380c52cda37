"""Dense feed-forward networks with hand-written reverse mode.

Beyond the usual forward/backward pair, the trunk path needs the spatial
Laplacian of the network output and gradients *through* it, so each layer
can also propagate (value, per-axis first derivative, per-axis diagonal
second derivative) and run the matching adjoint.  Everything is float64
numpy; no framework."""

import numpy as np

_SQRT6 = np.sqrt(6.0)


class Activation:
    """Value plus first three derivatives, each elementwise on z."""

    def __init__(self, name, f, d1, d2, d3, smooth):
        self.name = name
        self.f = f
        self.d1 = d1
        self.d2 = d2
        self.d3 = d3
        self.smooth = smooth  # usable under Laplacian propagation


def _tanh_d1(z, t):
    return 1.0 - t * t


ACTIVATIONS = {
    "linear": Activation(
        "linear",
        lambda z: z,
        lambda z: np.ones_like(z),
        lambda z: np.zeros_like(z),
        lambda z: np.zeros_like(z),
        smooth=True,
    ),
    "tanh": Activation(
        "tanh",
        np.tanh,
        lambda z: 1.0 - np.tanh(z) ** 2,
        lambda z: -2.0 * np.tanh(z) * (1.0 - np.tanh(z) ** 2),
        lambda z: -2.0 * (1.0 - np.tanh(z) ** 2) * (1.0 - 3.0 * np.tanh(z) ** 2),
        smooth=True,
    ),
    "sine": Activation(
        "sine",
        np.sin,
        np.cos,
        lambda z: -np.sin(z),
        lambda z: -np.cos(z),
        smooth=True,
    ),
    "relu": Activation(
        "relu",
        lambda z: np.maximum(z, 0.0),
        lambda z: (z > 0).astype(np.float64),
        lambda z: np.zeros_like(z),
        lambda z: np.zeros_like(z),
        smooth=False,
    ),
}


def _init_weight(rng, fan_in, fan_out, activation):
    if activation == "tanh":
        limit = _SQRT6 / np.sqrt(fan_in + fan_out)
        return rng.uniform(-limit, limit, size=(fan_in, fan_out))
    if activation == "relu":
        return rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_in, fan_out))
    return rng.normal(0.0, 1.0 / np.sqrt(fan_in), size=(fan_in, fan_out))


class Mlp:
    """layer_sizes = (in, h1, ..., out); the activation follows each affine
    map, with an optionally linear last layer (the usual regression head)."""

    def __init__(self, layer_sizes, activation, use_bias=True, rng=None, linear_output=False):
        if activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {activation!r}")
        if len(layer_sizes) < 2:
            raise ValueError("need at least one layer")
        self.layer_sizes = tuple(int(s) for s in layer_sizes)
        self.activation = activation
        self.use_bias = bool(use_bias)
        self.linear_output = bool(linear_output)
        rng = rng or np.random.default_rng(0)
        self.weights = [
            _init_weight(rng, fi, fo, activation)
            for fi, fo in zip(self.layer_sizes[:-1], self.layer_sizes[1:])
        ]
        self.biases = (
            [np.zeros(fo) for fo in self.layer_sizes[1:]] if self.use_bias else None
        )

    def _act(self, layer):
        if self.linear_output and layer == len(self.weights) - 1:
            return ACTIVATIONS["linear"]
        return ACTIVATIONS[self.activation]

    # -- parameter bookkeeping -------------------------------------------

    @property
    def params(self):
        if self.use_bias:
            out = []
            for w, b in zip(self.weights, self.biases):
                out.extend((w, b))
            return out
        return list(self.weights)

    def zero_grads(self):
        return [np.zeros_like(p) for p in self.params]

    # -- plain forward / backward ----------------------------------------

    def forward(self, x):
        a = np.asarray(x, dtype=np.float64)
        for i, w in enumerate(self.weights):
            z = a @ w
            if self.use_bias:
                z = z + self.biases[i]
            a = self._act(i).f(z)
        return a

    def forward_cached(self, x):
        a = np.asarray(x, dtype=np.float64)
        cache = []
        for i, w in enumerate(self.weights):
            z = a @ w
            if self.use_bias:
                z = z + self.biases[i]
            out = self._act(i).f(z)
            cache.append((a, z))
            a = out
        return a, cache

    def backward(self, cache, grad_out, grads=None):
        """Accumulate parameter gradients; returns them in `params` order."""
        if grads is None:
            grads = self.zero_grads()
        g = np.asarray(grad_out, dtype=np.float64)
        for i in range(len(self.weights) - 1, -1, -1):
            a_in, z = cache[i]
            gz = g * self._act(i).d1(z)
            if self.use_bias:
                grads[2 * i] += a_in.T @ gz
                grads[2 * i + 1] += gz.sum(axis=0)
            else:
                grads[i] += a_in.T @ gz
            if i > 0:
                g = gz @ self.weights[i].T
        return grads

    # -- forward / backward with diagonal second derivatives --------------

    def forward_lap_cached(self, x):
        """Returns (value, laplacian, cache) where laplacian is the sum of
        the exact diagonal second derivatives w.r.t. the input coordinates."""
        if not ACTIVATIONS[self.activation].smooth:
            raise ValueError(f"{self.activation} is not twice differentiable")
        a = np.asarray(x, dtype=np.float64)
        n_pts, dim = a.shape
        ad = np.broadcast_to(np.eye(dim)[:, None, :], (dim, n_pts, dim)).copy()
        add = np.zeros((dim, n_pts, dim))
        cache = []
        for i, w in enumerate(self.weights):
            act = self._act(i)
            z = a @ w
            if self.use_bias:
                z = z + self.biases[i]
            zd = ad @ w
            zdd = add @ w
            s1 = act.d1(z)
            s2 = act.d2(z)
            cache.append((a, ad, add, z, zd, zdd, s1, s2))
            a = act.f(z)
            add = s2 * zd**2 + s1 * zdd
            ad = s1 * zd
        return a, add.sum(axis=0), cache

    def backward_lap(self, cache, grad_val, grad_lap, grads=None):
        """Adjoint of forward_lap_cached for upstream gradients w.r.t. the
        value and the laplacian outputs."""
        if grads is None:
            grads = self.zero_grads()
        dim = cache[0][1].shape[0]
        gv = np.asarray(grad_val, dtype=np.float64)
        g1 = np.zeros((dim,) + gv.shape)
        g2 = np.broadcast_to(np.asarray(grad_lap, dtype=np.float64), (dim,) + gv.shape).copy()
        for i in range(len(self.weights) - 1, -1, -1):
            a_in, ad_in, add_in, z, zd, zdd, s1, s2 = cache[i]
            s3 = self._act(i).d3(z)
            gz = gv * s1 + (g1 * s2 * zd).sum(axis=0) + (g2 * (s3 * zd**2 + s2 * zdd)).sum(axis=0)
            gzd = g1 * s1 + 2.0 * g2 * s2 * zd
            gzdd = g2 * s1
            w = self.weights[i]
            gw = a_in.T @ gz
            for d in range(dim):
                gw += ad_in[d].T @ gzd[d] + add_in[d].T @ gzdd[d]
            if self.use_bias:
                grads[2 * i] += gw
                grads[2 * i + 1] += gz.sum(axis=0)
            else:
                grads[i] += gw
            if i > 0:
                gv = gz @ w.T
                g1 = gzd @ w.T
                g2 = gzdd @ w.T
        return grads
