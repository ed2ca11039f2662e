#!/usr/bin/env python3
"""Regenerates the renderer golden fixtures in this directory.

Each fixture is a crop (crop_N.ppm), its keypoints in crop coordinates
(kp_N.json) and the expected rendering (expected_N.ppm). The renderer here
is written from the drawing rule alone and shares no code with the library.
"""

import json
import math
import os

HERE = os.path.dirname(os.path.abspath(__file__))

NAMES = [
    "nose", "left_eye", "right_eye", "left_ear", "right_ear",
    "left_shoulder", "right_shoulder", "left_elbow", "right_elbow",
    "left_wrist", "right_wrist", "left_hip", "right_hip",
    "left_knee", "right_knee", "left_ankle", "right_ankle",
]

PALETTE = [
    (255, 255, 255), (0, 255, 0), (255, 0, 0), (0, 255, 85), (255, 64, 0),
    (0, 255, 170), (255, 128, 0), (0, 255, 255), (255, 192, 0), (0, 170, 255),
    (255, 255, 0), (0, 85, 255), (255, 0, 128), (0, 0, 255), (255, 0, 255),
    (85, 0, 255), (192, 0, 128),
]

MIN_PX = 2
FRACTION = 0.01
CONF = 0.3


def base_image(w, h, salt):
    return [[((3 * x + salt) % 256, (5 * y + 2 * salt) % 256, (x * y + salt) % 256)
             for x in range(w)] for y in range(h)]


def radius(w, h):
    return max(MIN_PX, int(math.floor(FRACTION * max(w, h) + 0.5)))


def render(img, kps):
    h, w = len(img), len(img[0])
    out = [row[:] for row in img]
    r = radius(w, h)
    for i, (x, y, c) in enumerate(kps):
        if c < CONF or not (0 <= x < w and 0 <= y < h):
            continue
        for py in range(h):
            for px in range(w):
                if (px - x) ** 2 + (py - y) ** 2 <= r * r:
                    out[py][px] = PALETTE[i]
    return out


def ppm(img):
    h, w = len(img), len(img[0])
    body = bytes(v for row in img for pix in row for v in pix)
    return b"P6\n%d %d\n255\n" % (w, h) + body


def pose(seed, w, h):
    # small deterministic generator; coordinates on a quarter-pixel grid
    state = seed
    pts = []
    for _ in NAMES:
        state = (state * 1103515245 + 12345) % (1 << 31)
        x = (state % (4 * (w + 8))) / 4.0 - 4.0
        state = (state * 1103515245 + 12345) % (1 << 31)
        y = (state % (4 * (h + 8))) / 4.0 - 4.0
        state = (state * 1103515245 + 12345) % (1 << 31)
        c = (state % 11) / 10.0
        pts.append((x, y, c))
    return pts


FIXTURES = [
    (64, 48, 1),
    (350, 120, 2),
    (250, 400, 3),
]


def main():
    for idx, (w, h, seed) in enumerate(FIXTURES):
        img = base_image(w, h, seed * 17)
        kps = pose(seed, w, h)
        if idx == 0:
            # two dots that overlap so draw order matters
            kps[3] = (20.0, 20.0, 0.9)
            kps[4] = (21.5, 20.0, 0.9)
        with open(os.path.join(HERE, "crop_%d.ppm" % idx), "wb") as f:
            f.write(ppm(img))
        with open(os.path.join(HERE, "expected_%d.ppm" % idx), "wb") as f:
            f.write(ppm(render(img, kps)))
        doc = {"keypoints": [{"name": n, "x": x, "y": y, "confidence": c}
                             for n, (x, y, c) in zip(NAMES, kps)]}
        with open(os.path.join(HERE, "kp_%d.json" % idx), "w") as f:
            json.dump(doc, f, indent=2)
            f.write("\n")


if __name__ == "__main__":
    main()
