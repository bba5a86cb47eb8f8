"""Synthetic vision-style instance generators.

Grid instances mimic the segmentation family: every pixel/voxel connects to
its neighborhood (4/8 in 2D, 6/26 in 3D) with similarity-derived capacities,
and to one terminal chosen by the sign of a smooth random field, which makes
the min cut follow region boundaries instead of hugging a terminal. The
noise parameter replaces that fraction of regional capacities with fresh
uniform draws, degrading regional consistency. The stereo kind builds two
4-neighborhood grids with disparity-shifted cross arcs (up to 2 or 5
counterparts per node).

Determinism: one random.Random(seed) drawn in a fixed documented order, and
an integer-only smooth field (coarse random lattice, integer multilinear
interpolation), so identical spec+seed gives byte-identical DIMACS output.
"""

import random
from dataclasses import dataclass, replace

from .dimacs import ProblemInstance
from .network import build_network

_KINDS = ("grid2d", "grid3d", "stereo")
_NEIGHBORHOODS = {"grid2d": (4, 8), "grid3d": (6, 26), "stereo": (2, 5)}

_CELL = 4            # lattice cell edge, in voxels
_AMP = 1024          # lattice values drawn from [-_AMP, _AMP]


@dataclass(frozen=True)
class InstanceSpec:
    """Parameters of a synthetic instance; (spec, seed) determines bytes."""
    kind: str
    width: int
    height: int
    depth: int = 1
    neighborhood: int = 4
    max_capacity: int = 10
    noise: float = 0.0
    seed: int = 0
    decimate: bool = False

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {_KINDS}")
        dims = (self.width, self.height) + ((self.depth,) if self.kind == "grid3d" else ())
        if any(d < 1 for d in dims):
            raise ValueError(f"dimensions must be positive, got {dims}")
        if self.max_capacity < 1:
            raise ValueError(f"max capacity must be >= 1, got {self.max_capacity}")
        if not (0.0 <= self.noise <= 1.0):
            raise ValueError(f"noise must lie in [0, 1], got {self.noise}")
        allowed = _NEIGHBORHOODS[self.kind]
        if self.neighborhood not in allowed:
            raise ValueError(
                f"{self.kind} supports neighborhoods {allowed}, got {self.neighborhood}")

    @property
    def name(self):
        dims = f"{self.width}x{self.height}"
        if self.kind == "grid3d":
            dims += f"x{self.depth}"
        tag = f"{self.kind}-{dims}-n{self.neighborhood}-c{self.max_capacity}-seed{self.seed}"
        if self.noise:
            tag += f"-noise{self.noise:g}"
        if self.decimate:
            tag += "-dec"
        return tag

    def effective_dims(self):
        """Axis sizes after optional decimation (each axis halved)."""
        if not self.decimate:
            return self.width, self.height, self.depth
        return max(1, self.width // 2), max(1, self.height // 2), max(1, self.depth // 2)


def _offsets(kind, neighborhood):
    if kind == "grid2d" or kind == "stereo":
        if neighborhood == 4 or kind == "stereo":
            return [(1, 0, 0), (0, 1, 0)]
        return [(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, -1, 0)]
    if neighborhood == 6:
        return [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    offs = []
    for dz in (0, 1):
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                if dz == 0 and (dy < 0 or (dy == 0 and dx <= 0)):
                    continue
                offs.append((dx, dy, dz))
    return offs


class _SmoothField:
    """Integer trilinear interpolation over a coarse random lattice."""

    def __init__(self, rng, w, h, d):
        self.lw = w // _CELL + 2
        self.lh = h // _CELL + 2
        self.ld = d // _CELL + 2
        self.values = [rng.randint(-_AMP, _AMP)
                       for _ in range(self.lw * self.lh * self.ld)]
        # interpolated values are scaled by _CELL**3 to stay integral
        self.scale = _CELL ** 3

    def _lat(self, ix, iy, iz):
        return self.values[ix + self.lw * (iy + self.lh * iz)]

    def at(self, x, y, z):
        cx, fx = divmod(x, _CELL)
        cy, fy = divmod(y, _CELL)
        cz, fz = divmod(z, _CELL)
        gx = _CELL - fx
        gy = _CELL - fy
        gz = _CELL - fz
        v = 0
        v += self._lat(cx, cy, cz) * gx * gy * gz
        v += self._lat(cx + 1, cy, cz) * fx * gy * gz
        v += self._lat(cx, cy + 1, cz) * gx * fy * gz
        v += self._lat(cx + 1, cy + 1, cz) * fx * fy * gz
        v += self._lat(cx, cy, cz + 1) * gx * gy * fz
        v += self._lat(cx + 1, cy, cz + 1) * fx * gy * fz
        v += self._lat(cx, cy + 1, cz + 1) * gx * fy * fz
        v += self._lat(cx + 1, cy + 1, cz + 1) * fx * fy * fz
        return v


def _similarity_cap(fa, fb, scale, cmax):
    maxdiff = 2 * _AMP * scale
    diff = fa - fb
    if diff < 0:
        diff = -diff
    if diff > maxdiff:
        diff = maxdiff
    return 1 + (cmax - 1) * (maxdiff - diff) // maxdiff


def generate_instance(spec):
    """Build the ProblemInstance for a spec; pure in (spec, seed)."""
    rng = random.Random(spec.seed)
    w, h, d = spec.effective_dims()
    cmax = spec.max_capacity
    if spec.kind == "stereo":
        return _generate_stereo(spec, rng, w, h, cmax)
    if spec.kind == "grid2d":
        d = 1

    s, t = 0, 1

    def nid(x, y, z):
        return 2 + x + w * (y + h * z)

    field = _SmoothField(rng, w, h, d)
    arcs = []
    # terminal arcs first, voxel row-major: one capacity draw per voxel
    for z in range(d):
        for y in range(h):
            for x in range(w):
                tcap = rng.randint(1, cmax)
                if field.at(x, y, z) >= 0:
                    arcs.append((s, nid(x, y, z), tcap))
                else:
                    arcs.append((nid(x, y, z), t, tcap))
    # regional arcs, offset-major inside voxel row-major order
    offs = _offsets(spec.kind, spec.neighborhood)
    for z in range(d):
        for y in range(h):
            for x in range(w):
                fa = field.at(x, y, z)
                for dx, dy, dz in offs:
                    nx, ny, nz = x + dx, y + dy, z + dz
                    if not (0 <= nx < w and 0 <= ny < h and 0 <= nz < d):
                        continue
                    u = rng.random()
                    if u < spec.noise:
                        c = rng.randint(1, cmax)
                    else:
                        c = _similarity_cap(fa, field.at(nx, ny, nz),
                                            field.scale, cmax)
                    a, b = nid(x, y, z), nid(nx, ny, nz)
                    arcs.append((a, b, c))
                    arcs.append((b, a, c))
    n = w * h * d + 2
    net = build_network(n, s, t, arcs)
    return ProblemInstance(name=spec.name, network=net)


def _generate_stereo(spec, rng, w, h, cmax):
    """Two 4-neighborhood grids with disparity-shifted cross arcs."""
    s, t = 0, 1
    grid = w * h

    def lid(x, y):
        return 2 + x + w * y

    def rid(x, y):
        return 2 + grid + x + w * y

    fl = _SmoothField(rng, w, h, 1)
    fr = _SmoothField(rng, w, h, 1)
    arcs = []
    for side, field, ident in (("L", fl, lid), ("R", fr, rid)):
        for y in range(h):
            for x in range(w):
                tcap = rng.randint(1, cmax)
                if field.at(x, y, 0) >= 0:
                    arcs.append((s, ident(x, y), tcap))
                else:
                    arcs.append((ident(x, y), t, tcap))
    for field, ident in ((fl, lid), (fr, rid)):
        for y in range(h):
            for x in range(w):
                fa = field.at(x, y, 0)
                for dx, dy in ((1, 0), (0, 1)):
                    nx, ny = x + dx, y + dy
                    if not (0 <= nx < w and 0 <= ny < h):
                        continue
                    u = rng.random()
                    if u < spec.noise:
                        c = rng.randint(1, cmax)
                    else:
                        c = _similarity_cap(fa, field.at(nx, ny, 0),
                                            field.scale, cmax)
                    a, b = ident(x, y), ident(nx, ny)
                    arcs.append((a, b, c))
                    arcs.append((b, a, c))
    # cross arcs: left (x, y) to right (x - disparity, y)
    for y in range(h):
        for x in range(w):
            fa = fl.at(x, y, 0)
            for disp in range(spec.neighborhood):
                nx = x - disp
                if nx < 0:
                    continue
                u = rng.random()
                if u < spec.noise:
                    c = rng.randint(1, cmax)
                else:
                    c = _similarity_cap(fa, fr.at(nx, y, 0), fl.scale, cmax)
                a, b = lid(x, y), rid(nx, y)
                arcs.append((a, b, c))
                arcs.append((b, a, c))
    n = 2 * grid + 2
    net = build_network(n, s, t, arcs)
    return ProblemInstance(name=spec.name, network=net)


def parse_spec_string(text):
    """Parse 'kind=grid3d,w=8,h=8,d=4,nb=6,cap=10,seed=1[,noise=0.1][,decimate]'."""
    fields = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" in part:
            key, _, val = part.partition("=")
            fields[key.strip()] = val.strip()
        else:
            fields[part] = "1"
    aliases = {"w": "width", "h": "height", "d": "depth", "nb": "neighborhood",
               "cap": "max_capacity", "c": "max_capacity"}
    kwargs = {}
    for key, val in fields.items():
        key = aliases.get(key, key)
        if key == "kind":
            kwargs[key] = val
        elif key == "noise":
            kwargs[key] = float(val)
        elif key == "decimate":
            kwargs[key] = val not in ("0", "false", "no")
        else:
            kwargs[key] = int(val)
    if "kind" not in kwargs:
        raise ValueError(f"spec string {text!r} is missing kind=...")
    return InstanceSpec(**kwargs)


def decimated(spec):
    """The same spec with each axis halved (bone_sub*-style decimation)."""
    return replace(spec, decimate=True)
