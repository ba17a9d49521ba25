"""Brute-force reference implementations, deliberately loop-based and numpy-free.

They share no code with the package beyond reading pixels out of images.
"""
from fractions import Fraction



def pixel_grid(img):
    """List-of-lists of 0/1 (1 = Black)."""
    return [[1 if v else 0 for v in row] for row in img.pixels.tolist()]


def round_half_up_positive(x):
    whole = int(x)
    return whole + (1 if x - whole >= 0.5 else 0)


def scan_spans(values, want):
    """Maximal spans of ``want`` in a list, as inclusive (start, end, touches_frame)."""
    spans, start = [], None
    for i, v in enumerate(values + [None]):
        if v == want and start is None:
            start = i
        elif v != want and start is not None:
            spans.append((start, i - 1, start == 0 or i - 1 == len(values) - 1))
            start = None
    return spans


def segment(start, end, bias):
    length = end - start + 1
    mid = (start + end) // 2
    width = max(1, round_half_up_positive(bias * length))
    left = mid - (width - 1) // 2
    right = left + width - 1
    return max(start, left), min(end, right)


def sketch_points(img, bias, directions=("hb", "hw", "vb", "vw")):
    grid = pixel_grid(img)
    h, w = len(grid), len(grid[0])
    black, white = set(), set()
    for d in directions:
        want = 1 if d[1] == "b" else 0
        if d[0] == "h":
            lines = [(y, grid[y]) for y in range(h)]
        else:
            lines = [(x, [grid[y][x] for y in range(h)]) for x in range(w)]
        for idx, values in lines:
            for s, e, touches in scan_spans(values, want):
                if want == 0 and touches:
                    continue
                lo, hi = segment(s, e, bias)
                for k in range(lo, hi + 1):
                    pt = (k, idx) if d[0] == "h" else (idx, k)
                    (black if want else white).add(pt)
    return black, white


def mean_centroid(img):
    grid = pixel_grid(img)
    pts = [(x, y) for y, row in enumerate(grid) for x, v in enumerate(row) if v]
    return Fraction(sum(p[0] for p in pts), len(pts)), Fraction(sum(p[1] for p in pts), len(pts))


def exhaustive_hits(black, white, target, dx, dy):
    """(w, b) by checking every sketch point against the target one at a time."""
    grid = pixel_grid(target)
    h, w_ = len(grid), len(grid[0])

    def sample(x, y):
        if 0 <= x < w_ and 0 <= y < h:
            return grid[y][x]
        return 0

    b = sum(1 for x, y in black if sample(x + dx, y + dy) == 1)
    w = sum(1 for x, y in white if sample(x + dx, y + dy) == 0)
    return w, b


def round_shift(v):
    """Nearest integer, exact halves rounded toward +infinity."""
    v = Fraction(v)
    down = v.numerator // v.denominator
    return down + (1 if v - down >= Fraction(1, 2) else 0)


def reference_accuracy(w, nw, b, nb):
    if nw == 0 and nb == 0:
        return 0.0
    if nw == 0:
        return 100.0 * b / nb
    if nb == 0:
        return 100.0 * w / nw
    return 50.0 * (w / nw + b / nb)


def reference_classify(query, glyphs, bias, gravity=True):
    """Top-1 label over ``{label: BinaryImage}`` using only the oracles above."""
    qx, qy = mean_centroid(query)
    best = None
    for label in sorted(glyphs):
        g = glyphs[label]
        black, white = sketch_points(g, bias)
        gx, gy = mean_centroid(g)
        dx, dy = (round_shift(qx - gx), round_shift(qy - gy)) if gravity else (0, 0)
        w, b = exhaustive_hits(black, white, query, dx, dy)
        acc = reference_accuracy(w, len(white), b, len(black))
        if best is None or acc > best[0] + 1e-9:
            best = (acc, label)
    return best[1]
