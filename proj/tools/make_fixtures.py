#!/usr/bin/env python3
"""Writes the dense intersection fixtures into fixtures/.

Four approach lanes into a crossing; vehicles queue on each approach and drive
straight through, pedestrians cross near the corners.
"""
import json
import math
import pathlib
import random

# (vehicles, pedestrians, agent types incl. pedestrians)
ROWS = [(16, 5, 4), (12, 2, 4), (8, 2, 3), (10, 1, 4), (15, 1, 4), (8, 2, 3)]
LANE = 1.75
START = 14.0
SPACING = 10.0
RUN_OUT = 40.0

APPROACHES = [  # (start direction unit vector pointing toward center, lateral offset vector)
    ((1.0, 0.0), (0.0, -LANE)),   # eastbound
    ((-1.0, 0.0), (0.0, LANE)),   # westbound
    ((0.0, 1.0), (LANE, 0.0)),    # northbound
    ((0.0, -1.0), (-LANE, 0.0)),  # southbound
]


def vehicle_types(n_types):
    return ["car", "bicycle", "tricycle"] if n_types >= 4 else ["car", "bicycle"]


def make(index, vehicles, pedestrians, n_types, seed):
    rng = random.Random(seed)
    types = vehicle_types(n_types)
    agents = []
    queue = [0, 0, 0, 0]
    for i in range(vehicles):
        lane = i % 4
        (dx, dy), (ox, oy) = APPROACHES[lane]
        back = START + SPACING * queue[lane] + rng.uniform(0.0, 2.0)
        queue[lane] += 1
        x, y = -dx * back + ox, -dy * back + oy
        gx, gy = dx * RUN_OUT + ox, dy * RUN_OUT + oy
        t = types[(i + index) % len(types)]
        agents.append({
            "id": f"v{i:02d}",
            "type": t,
            "position": [round(x, 3), round(y, 3)],
            "theta": round(math.atan2(dy, dx), 6),
            "goal": [round(gx, 3), round(gy, 3)],
        })
    corners = [(8.0, -7.0, 8.0, 7.0), (-8.0, 7.0, -8.0, -7.0), (7.0, 8.0, -7.0, 8.0),
               (-7.0, -8.0, 7.0, -8.0), (9.5, 7.0, 9.5, -7.0)]
    for j in range(pedestrians):
        x, y, gx, gy = corners[j % len(corners)]
        agents.append({
            "id": f"p{j}",
            "type": "pedestrian",
            "position": [x, y],
            "theta": round(math.atan2(gy - y, gx - x), 6),
            "goal": [gx, gy],
        })
    return {
        "name": f"traffic-{index + 1}",
        "description": f"{vehicles} vehicles, {pedestrians} pedestrians, {n_types} agent types",
        "duration": 45,
        # The library defaults weigh summed clearance so heavily that agents
        # drift away from their goals in crowds; these keep them on task.
        "nav": {"weights": {"c": 0.01, "d": 0.2}},
        "seed": seed,
        "agents": agents,
    }


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
    for i, (v, p, t) in enumerate(ROWS):
        doc = make(i, v, p, t, seed=100 + i)
        (out / f"traffic-{i + 1}.json").write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
