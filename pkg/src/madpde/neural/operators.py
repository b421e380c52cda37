"""DeepONet operators: bias-free linear branch nets combined with nonlinear
trunk nets, and the dual variant that adds a boundary-input network and a
source-input network.

Because every branch is a linear map without bias and the fusion is a dot
product (plus addition for the dual form), the operators are exactly linear
in their input functions."""

import numpy as np

from .mlp import Mlp


class DeepOnet:
    def __init__(self, branch, trunk, combine=None, coord_scale=1.0, coord_shift=0.0):
        if branch.layer_sizes[-1] != trunk.layer_sizes[-1]:
            raise ValueError("branch and trunk latent dimensions disagree")
        if branch.use_bias or branch.activation != "linear":
            raise ValueError("branch must be a bias-free linear map")
        self.branch = branch
        self.trunk = trunk
        self.combine = None if combine is None else np.asarray(combine, dtype=np.float64)
        # fixed affine map applied to coordinates before the trunk (keeps
        # tanh inputs O(1)); second derivatives pick up coord_scale^2
        self.coord_scale = float(coord_scale)
        self.coord_shift = float(coord_shift)

    def _map_coords(self, x):
        return x * self.coord_scale + self.coord_shift

    @property
    def latent_dim(self):
        return self.trunk.layer_sizes[-1]

    @property
    def input_dim(self):
        return self.branch.layer_sizes[0]

    @property
    def coord_dim(self):
        return self.trunk.layer_sizes[0]

    @property
    def params(self):
        out = self.branch.params + self.trunk.params
        if self.combine is not None:
            out.append(self.combine)
        return out

    def _check(self, g, x):
        g = np.atleast_2d(np.asarray(g, dtype=np.float64))
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if g.shape[1] != self.input_dim:
            raise ValueError(
                f"branch input length {g.shape[1]} != expected {self.input_dim}"
            )
        if x.shape[1] != self.coord_dim:
            raise ValueError(f"coordinate dim {x.shape[1]} != expected {self.coord_dim}")
        return g, x

    def forward(self, g, x):
        """(N, Mb) x (P, dim) -> (N, P)."""
        g, x = self._check(g, x)
        b = self.branch.forward(g)
        t = self.trunk.forward(self._map_coords(x))
        if self.combine is not None:
            t = t * self.combine
        return b @ t.T

    def forward_with_laplacian(self, g, x):
        g, x = self._check(g, x)
        b = self.branch.forward(g)
        t, lap, _ = self.trunk.forward_lap_cached(self._map_coords(x))
        lap = lap * self.coord_scale**2
        if self.combine is not None:
            t = t * self.combine
            lap = lap * self.combine
        return b @ t.T, b @ lap.T


class DualDeepOnet:
    """output(g, f, x) = net_g(g, x) + net_f(f, x)."""

    def __init__(self, net_g, net_f):
        if net_g.coord_dim != net_f.coord_dim:
            raise ValueError("coordinate dimensions disagree")
        self.net_g = net_g
        self.net_f = net_f

    @property
    def coord_dim(self):
        return self.net_g.coord_dim

    @property
    def params(self):
        return self.net_g.params + self.net_f.params

    def forward(self, g, f, x):
        return self.net_g.forward(g, x) + self.net_f.forward(f, x)

    def forward_with_laplacian(self, g, f, x):
        ug, lg = self.net_g.forward_with_laplacian(g, x)
        uf, lf = self.net_f.forward_with_laplacian(f, x)
        return ug + uf, lg + lf


# Reference full-scale layouts (latent 1000, trunk widths 110/90/220); the
# width_scale and latent arguments shrink them proportionally for desk runs.
_TRUNK_BASE = {"baseline": (110, 4), "wide": (220, 4), "deep": (110, 8)}


def _make_deeponet(rng, input_len, coord_dim, latent, width, depth, activation, combine,
                   coord_scale, coord_shift):
    branch = Mlp((input_len, latent), "linear", use_bias=False, rng=rng)
    trunk = Mlp((coord_dim, *([width] * depth), latent), activation, use_bias=True,
                rng=rng, linear_output=True)
    comb = np.ones(latent) if combine else None
    return DeepOnet(branch, trunk, combine=comb, coord_scale=coord_scale, coord_shift=coord_shift)


def coord_normalization(domain_kind):
    """Affine map taking the domain's bounding box to [-1, 1]^d."""
    from ..geometry import DomainKind

    if DomainKind(domain_kind) is DomainKind.UNIT_DISK:
        return 1.0, 0.0
    return 2.0, -1.0


def make_operator(
    arch,
    boundary_len,
    lattice_len=None,
    coord_dim=2,
    latent=100,
    width_scale=0.5,
    seed=0,
    coord_scale=1.0,
    coord_shift=0.0,
):
    """Named architectures: baseline / wide / deep single-input operators,
    the dual (boundary + source) operator, and the 3D relu-trunk variant."""
    rng = np.random.default_rng(seed)
    if arch in _TRUNK_BASE:
        width, depth = _TRUNK_BASE[arch]
        width = max(4, round(width * width_scale))
        p = 2 * latent if arch == "wide" else latent
        activation = "relu" if coord_dim == 3 else "tanh"
        return _make_deeponet(
            rng, boundary_len, coord_dim, p, width, depth, activation,
            coord_dim == 3, coord_scale, coord_shift,
        )
    if arch == "dual":
        if lattice_len is None:
            raise ValueError("dual architecture needs the lattice length for the source branch")
        wg = max(4, round(90 * width_scale))
        wf = max(4, round(110 * width_scale))
        net_g = _make_deeponet(rng, boundary_len, coord_dim, latent, wg, 4, "tanh", False,
                               coord_scale, coord_shift)
        net_f = _make_deeponet(rng, lattice_len, coord_dim, latent, wf, 4, "tanh", False,
                               coord_scale, coord_shift)
        return DualDeepOnet(net_g, net_f)
    raise ValueError(f"unknown architecture {arch!r}")
