"""Model container (.madnn): magic + version, a JSON architecture manifest,
then raw little-endian f64 parameter blocks in model.params order."""

import json
import struct

import numpy as np

from .mlp import Mlp
from .operators import DeepOnet, DualDeepOnet

MAGIC = b"MADN"
FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    pass


def _net_manifest(net):
    return {
        "branch_sizes": list(net.branch.layer_sizes),
        "trunk_sizes": list(net.trunk.layer_sizes),
        "trunk_activation": net.trunk.activation,
        "trunk_linear_output": net.trunk.linear_output,
        "combine": net.combine is not None,
        "coord_scale": net.coord_scale,
        "coord_shift": net.coord_shift,
    }


def _net_from_manifest(m):
    branch = Mlp(m["branch_sizes"], "linear", use_bias=False)
    trunk = Mlp(
        m["trunk_sizes"],
        m["trunk_activation"],
        use_bias=True,
        linear_output=m.get("trunk_linear_output", False),
    )
    combine = np.ones(m["trunk_sizes"][-1]) if m["combine"] else None
    return DeepOnet(
        branch,
        trunk,
        combine=combine,
        coord_scale=m.get("coord_scale", 1.0),
        coord_shift=m.get("coord_shift", 0.0),
    )


def save_model(model, path, provenance=None):
    if isinstance(model, DualDeepOnet):
        manifest = {"kind": "dual", "nets": [_net_manifest(model.net_g), _net_manifest(model.net_f)]}
    else:
        manifest = {"kind": "deeponet", "nets": [_net_manifest(model)]}
    if provenance:
        manifest["provenance"] = provenance
    blob = json.dumps(manifest, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<HI", FORMAT_VERSION, len(blob)))
        fh.write(blob)
        for p in model.params:
            fh.write(np.ascontiguousarray(p, dtype="<f8").tobytes())


def load_model(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:4] != MAGIC:
        raise ModelFormatError(f"bad magic {raw[:4]!r}")
    version, mlen = struct.unpack_from("<HI", raw, 4)
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format version {version}")
    manifest = json.loads(raw[10 : 10 + mlen].decode("utf-8"))
    if manifest["kind"] == "dual":
        model = DualDeepOnet(
            _net_from_manifest(manifest["nets"][0]),
            _net_from_manifest(manifest["nets"][1]),
        )
    else:
        model = _net_from_manifest(manifest["nets"][0])
    off = 10 + mlen
    for p in model.params:
        n = p.size
        if off + 8 * n > len(raw):
            raise ModelFormatError("parameter payload truncated")
        p[...] = np.frombuffer(raw, dtype="<f8", count=n, offset=off).reshape(p.shape)
        off += 8 * n
    if off != len(raw):
        raise ModelFormatError("trailing bytes after parameter payload")
    return model, manifest.get("provenance")
