"""Twenty fixed raycast scenes shared by the sim tests and the acceptance gate."""

import math

from saferos.messages import RobotState
from saferos.sim import LidarConfig, World

_BOX = (-5.0, -5.0, 5.0, 5.0)


def _case(segments=(), circles=(), pose=(0.0, 0.0, 0.0), n=7, fov=2 * math.pi, range_max=10.0, bounds=_BOX):
    world = World(bounds=bounds, segments=tuple(segments), circles=tuple(circles))
    return world, RobotState(*pose), LidarConfig(n_beams=n, fov=fov, range_max=range_max)


CASES = [
    _case(segments=[(1, -1, 1, 1)], n=1),
    _case(n=1),
    _case(circles=[(2, 0, 0.5)], n=1),
    _case(segments=[(1, -1, 1, 1)], circles=[(2, 0, 0.5)], n=9, fov=math.pi / 2),
    _case(circles=[(1.3, 0.7, 0.4), (-2.1, 1.9, 0.8)], n=13),
    _case(segments=[(0.5, 2, 3, -1.5), (-3, -3, -1, 2.2)], pose=(0.2, -0.3, 0.4), n=11),
    _case(circles=[(0.0, 3.1, 1.2)], pose=(0.1, 0.2, 1.2), n=5, fov=1.0),
    _case(segments=[(-4, 4.5, 4, 4.5)], pose=(0.0, 4.0, math.pi / 2), n=3, fov=0.6),
    _case(pose=(4.9, 4.9, 0.3), n=8),
    _case(pose=(-4.2, 0.3, -2.9), n=10, range_max=3.0),
    _case(circles=[(0.6, 0.0, 0.2), (1.5, 0.05, 0.3)], n=9, fov=0.4),
    _case(segments=[(1, 1, 2, 2.5), (2, 2.5, 3, 1), (3, 1, 1, 1)], pose=(2.0, 0.0, 1.57), n=15, fov=2.0),
    _case(circles=[(3.0, 3.0, 1.0)], segments=[(-1, 3, -1, -3)], pose=(0.5, 0.5, 2.2), n=17),
    _case(segments=[(0.3, -0.2, 0.3, 0.2)], pose=(0.0, 0.0, 0.05), n=4, fov=0.3),
    _case(circles=[(-1.0, -1.0, 0.3), (1.0, -1.0, 0.3), (0.0, 1.4, 0.3)], n=24),
    _case(segments=[(-2, -0.5, 2, -0.5), (-2, 0.5, 2, 0.5)], pose=(-1.5, 0.0, 0.02), n=9, fov=1.5),
    _case(bounds=(0.0, 0.0, 2.0, 1.0), pose=(0.37, 0.61, -0.8), n=12),
    _case(circles=[(0.0, 0.0, 4.0)], pose=(0.5, -0.2, 0.0), n=6),
    _case(segments=[(2.0, -3.0, 2.5, 3.0)], circles=[(4.0, 0.3, 0.6)], pose=(-3.0, 0.1, 0.1), n=7, fov=0.9, range_max=6.5),
    _case(circles=[(2.2, -1.7, 0.9), (-0.4, 2.6, 0.45)], segments=[(-3.3, -4.1, 1.7, -2.2)], pose=(0.9, 0.3, -1.1), n=31),
]
