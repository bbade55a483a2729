"""2D world, unicycle kinematics and lidar raycasting.

The world is a set of zero-thickness wall segments, solid circles and an
axis-aligned bounding rectangle. Ranges are computed analytically per beam.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from saferos.messages import RobotState, Scan, Twist

# Parallel-ray cutoff for the ray/line solve.
_EPS = 1e-12


class WorldFormatError(ValueError):
    pass


@dataclass(frozen=True)
class World:
    bounds: tuple[float, float, float, float]
    segments: tuple[tuple[float, float, float, float], ...] = ()
    circles: tuple[tuple[float, float, float], ...] = ()
    start: RobotState = field(default_factory=lambda: RobotState(0.0, 0.0, 0.0))
    body_radius: float = 0.0

    def __post_init__(self) -> None:
        xmin, ymin, xmax, ymax = self.bounds
        if not (xmax > xmin and ymax > ymin):
            raise WorldFormatError(f"degenerate bounds {self.bounds}")
        for c in self.circles:
            if not c[2] > 0:
                raise WorldFormatError(f"circle radius must be positive: {c}")
        if self.body_radius < 0:
            raise WorldFormatError("body_radius must be >= 0")
        if not self.contains(self.start.x, self.start.y):
            raise WorldFormatError(f"start {self.start} outside bounds")

    def contains(self, x: float, y: float) -> bool:
        xmin, ymin, xmax, ymax = self.bounds
        return xmin <= x <= xmax and ymin <= y <= ymax

    def bound_segments(self) -> tuple[tuple[float, float, float, float], ...]:
        xmin, ymin, xmax, ymax = self.bounds
        return (
            (xmin, ymin, xmax, ymin),
            (xmax, ymin, xmax, ymax),
            (xmax, ymax, xmin, ymax),
            (xmin, ymax, xmin, ymin),
        )


@dataclass(frozen=True)
class LidarConfig:
    n_beams: int = 360
    fov: float = 2.0 * math.pi
    range_max: float = 10.0
    noise_sigma: float = 0.0

    def __post_init__(self) -> None:
        if self.n_beams < 1:
            raise ValueError("n_beams must be >= 1")
        if not self.range_max > 0:
            raise ValueError("range_max must be > 0")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")

    def beam_layout(self) -> tuple[float, float]:
        """Return (angle_min, angle_increment).

        A full circle is split into n equal sectors starting at -pi so no
        beam is duplicated; a partial fan spans [-fov/2, fov/2]. A single
        beam always points straight ahead.
        """
        if self.n_beams == 1:
            return 0.0, 0.0
        if self.fov >= 2.0 * math.pi - 1e-12:
            return -math.pi, 2.0 * math.pi / self.n_beams
        return -self.fov / 2.0, self.fov / (self.n_beams - 1)


def parse_world(text: str) -> World:
    bounds = None
    segments: list[tuple[float, float, float, float]] = []
    circles: list[tuple[float, float, float]] = []
    start = None
    arity = {"bounds": 4, "wall": 4, "circle": 3, "start": 3}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *rest = line.split()
        if kind not in arity:
            raise WorldFormatError(f"line {lineno}: unknown record {kind!r}")
        if len(rest) != arity[kind]:
            raise WorldFormatError(f"line {lineno}: {kind} takes {arity[kind]} numbers")
        try:
            nums = tuple(float(v) for v in rest)
        except ValueError:
            raise WorldFormatError(f"line {lineno}: bad number in {line!r}") from None
        if kind == "bounds":
            bounds = nums
        elif kind == "wall":
            segments.append(nums)
        elif kind == "circle":
            circles.append(nums)
        else:
            start = RobotState(*nums)
    if bounds is None:
        raise WorldFormatError("world file has no bounds record")
    kwargs = {} if start is None else {"start": start}
    return World(bounds=bounds, segments=tuple(segments), circles=tuple(circles), **kwargs)


def load_world(path: str | Path) -> World:
    return parse_world(Path(path).read_text())


def _ray_segment_hits(ox, oy, dx, dy, segs: np.ndarray) -> np.ndarray:
    """Distance along each ray to each segment; inf where missed.

    dx, dy have shape (n,), segs shape (m, 4). Result shape (n, m).
    """
    if len(segs) == 0:
        return np.full((len(dx), 0), np.inf)
    ax, ay, bx, by = (segs[:, k][None, :] for k in range(4))
    ex, ey = bx - ax, by - ay
    dx = dx[:, None]
    dy = dy[:, None]
    wx, wy = ax - ox, ay - oy
    denom = dx * ey - dy * ex
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        t = (wx * ey - wy * ex) / denom
        u = (wx * dy - wy * dx) / denom
    hit = (np.abs(denom) > _EPS) & (t >= 0.0) & (u >= 0.0) & (u <= 1.0)
    out = np.where(hit, t, np.inf)

    # Ray running along a segment's own line: first endpoint ahead, or 0 if inside it.
    parallel = np.abs(denom) <= _EPS
    if parallel.any():
        collinear = parallel & (np.abs(wx * dy - wy * dx) <= _EPS)
        if collinear.any():
            ta = wx * dx + wy * dy
            tb = (bx - ox) * dx + (by - oy) * dy
            lo = np.minimum(ta, tb)
            hi = np.maximum(ta, tb)
            t_col = np.where(lo >= 0.0, lo, np.where(hi >= 0.0, 0.0, np.inf))
            out = np.where(collinear, np.minimum(out, t_col), out)
    return out


def _ray_circle_hits(ox, oy, dx, dy, circles: np.ndarray) -> np.ndarray:
    if len(circles) == 0:
        return np.full((len(dx), 0), np.inf)
    cx, cy, r = (circles[:, k][None, :] for k in range(3))
    fx, fy = ox - cx, oy - cy
    b = dx[:, None] * fx + dy[:, None] * fy
    c = fx * fx + fy * fy - r * r
    disc = b * b - c
    with np.errstate(invalid="ignore"):
        t = -b - np.sqrt(disc)
    out = np.where((disc >= 0.0) & (t >= 0.0), t, np.inf)
    # Origin inside a circle: the beam is blocked immediately.
    return np.where(c < 0.0, 0.0, out)


def beam_distances(world: World, ox: float, oy: float, angles: np.ndarray) -> np.ndarray:
    """Exact distance to the first surface along each absolute angle (inf if none)."""
    dx, dy = np.cos(angles), np.sin(angles)
    segs = np.array(world.segments + world.bound_segments(), dtype=float).reshape(-1, 4)
    circles = np.array(world.circles, dtype=float).reshape(-1, 3)
    hits = np.concatenate(
        [_ray_segment_hits(ox, oy, dx, dy, segs), _ray_circle_hits(ox, oy, dx, dy, circles)],
        axis=1,
    )
    return hits.min(axis=1)


def raycast(world: World, pose: RobotState, cfg: LidarConfig, rng: np.random.Generator | None = None) -> Scan:
    angle_min, inc = cfg.beam_layout()
    rel = angle_min + inc * np.arange(cfg.n_beams)
    ranges = np.minimum(beam_distances(world, pose.x, pose.y, pose.theta + rel), cfg.range_max)
    if cfg.noise_sigma > 0.0:
        if rng is None:
            raise ValueError("noise_sigma > 0 requires an rng")
        ranges = np.clip(ranges + rng.normal(0.0, cfg.noise_sigma, cfg.n_beams), 0.0, cfg.range_max)
    return Scan(tuple(float(r) for r in ranges), angle_min, inc, cfg.range_max)


def _inflated_obstacles(world: World) -> tuple[np.ndarray, np.ndarray]:
    """Segments and circles of the free-space boundary for a disc robot."""
    rad = world.body_radius
    xmin, ymin, xmax, ymax = world.bounds
    xmin, ymin, xmax, ymax = xmin + rad, ymin + rad, xmax - rad, ymax - rad
    segs = [
        (xmin, ymin, xmax, ymin),
        (xmax, ymin, xmax, ymax),
        (xmax, ymax, xmin, ymax),
        (xmin, ymax, xmin, ymin),
    ]
    circles = [(cx, cy, r + rad) for cx, cy, r in world.circles]
    for ax, ay, bx, by in world.segments:
        if rad == 0.0:
            segs.append((ax, ay, bx, by))
            continue
        length = math.hypot(bx - ax, by - ay)
        if length > 0.0:
            nx, ny = -(by - ay) / length * rad, (bx - ax) / length * rad
            segs.append((ax + nx, ay + ny, bx + nx, by + ny))
            segs.append((ax - nx, ay - ny, bx - nx, by - ny))
        circles += [(ax, ay, rad), (bx, by, rad)]
    return np.array(segs, dtype=float).reshape(-1, 4), np.array(circles, dtype=float).reshape(-1, 3)


def integrate(s: RobotState, cmd: Twist, dt: float) -> RobotState:
    """Exact-arc unicycle update, ignoring obstacles."""
    v, w = cmd.linear_x, cmd.angular_z
    if abs(w) < 1e-9:
        x = s.x + v * math.cos(s.theta) * dt
        y = s.y + v * math.sin(s.theta) * dt
    else:
        # Same arc as (v/w)(sin(th + w dt) - sin th), written as a chord of
        # length v dt sinc(w dt / 2) so small w does not cancel catastrophically.
        half = 0.5 * w * dt
        chord = v * dt * math.sin(half) / half
        x = s.x + chord * math.cos(s.theta + half)
        y = s.y + chord * math.sin(s.theta + half)
    return RobotState(x, y, s.theta + w * dt, s.t + dt)


def step(world: World, s: RobotState, cmd: Twist, dt: float) -> tuple[RobotState, bool]:
    """Advance the robot by dt under cmd.

    Returns the new state and a collision flag. If the swept chord from the
    old to the new position enters an (inflated) obstacle, the robot is
    placed at the first contact point instead.
    """
    if not dt > 0:
        raise ValueError("dt must be > 0")
    nxt = integrate(s, cmd, dt)
    ddx, ddy = nxt.x - s.x, nxt.y - s.y
    length = math.hypot(ddx, ddy)
    if length == 0.0:
        return nxt, False
    ux, uy = np.array([ddx / length]), np.array([ddy / length])
    segs, circles = _inflated_obstacles(world)
    hits = np.concatenate(
        [_ray_segment_hits(s.x, s.y, ux, uy, segs), _ray_circle_hits(s.x, s.y, ux, uy, circles)],
        axis=1,
    )
    contact = float(hits.min()) if hits.size else math.inf
    if contact < length:
        return RobotState(s.x + ux[0] * contact, s.y + uy[0] * contact, nxt.theta, nxt.t), True
    return nxt, False


def _point_segment_distance(px: float, py: float, seg: tuple[float, float, float, float]) -> float:
    ax, ay, bx, by = seg
    ex, ey = bx - ax, by - ay
    ll = ex * ex + ey * ey
    u = 0.0 if ll == 0.0 else min(1.0, max(0.0, ((px - ax) * ex + (py - ay) * ey) / ll))
    return math.hypot(px - (ax + u * ex), py - (ay + u * ey))


def min_clearance(world: World, pose: RobotState, range_max: float = 10.0) -> float:
    """Distance from the robot point to the nearest wall or circle boundary.

    The bounding rectangle is not an obstacle here. With no obstacles the
    sentinel ``range_max * 10`` is returned.
    """
    dists = [_point_segment_distance(pose.x, pose.y, seg) for seg in world.segments]
    dists += [abs(math.hypot(pose.x - cx, pose.y - cy) - r) for cx, cy, r in world.circles]
    return min(dists) if dists else range_max * 10.0
