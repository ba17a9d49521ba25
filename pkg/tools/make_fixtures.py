"""Regenerate the bundled glyph fixtures from the hand-drawn pixel fonts below.

    python tools/make_fixtures.py

Each glyph is normalized onto a 64x64 canvas (margin 4) and written as a
template-set directory under src/sketchocr/fixtures/<style>/.
"""
from pathlib import Path

from sketchocr.raster import BinaryImage
from sketchocr.templates import build_set, save_set

OUT = Path(__file__).resolve().parents[1] / "src" / "sketchocr" / "fixtures"

# 5x7, one-pixel strokes
BLOCK = {
    "A": [".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"],
    "B": ["####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."],
    "C": [".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."],
    "D": ["####.", "#...#", "#...#", "#...#", "#...#", "#...#", "####."],
    "E": ["#####", "#....", "#....", "####.", "#....", "#....", "#####"],
    "F": ["#####", "#....", "#....", "####.", "#....", "#....", "#...."],
    "G": [".###.", "#...#", "#....", "#.###", "#...#", "#...#", ".####"],
    "H": ["#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"],
    "I": ["###", ".#.", ".#.", ".#.", ".#.", ".#.", "###"],
    "J": ["..###", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."],
    "K": ["#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#"],
    "L": ["#....", "#....", "#....", "#....", "#....", "#....", "#####"],
    "M": ["#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"],
    "N": ["#...#", "#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#"],
    "O": [".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."],
    "P": ["####.", "#...#", "#...#", "####.", "#....", "#....", "#...."],
    "Q": [".###.", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#"],
    "R": ["####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#"],
    "S": [".####", "#....", "#....", ".###.", "....#", "....#", "####."],
    "T": ["#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."],
    "U": ["#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."],
    "V": ["#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", "..#.."],
    "W": ["#...#", "#...#", "#...#", "#.#.#", "#.#.#", "#.#.#", ".#.#."],
    "X": ["#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#"],
    "Y": ["#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#.."],
    "Z": ["#####", "....#", "...#.", "..#..", ".#...", "#....", "#####"],
}

# roughly 7x9, doubled stems and serifs
SERIF = {
    "A": ["...#...", "..###..", "..#.##.", ".#..##.", ".#..##.", ".#####.", "#....##", "#....##", "##..###"],
    "B": ["######.", ".##..##", ".##..##", ".##..##", ".#####.", ".##..##", ".##..##", ".##..##", "######."],
    "C": ["..#####", ".##...#", "##.....", "##.....", "##.....", "##.....", "##.....", ".##...#", "..#####"],
    "D": ["#####..", ".##.##.", ".##..##", ".##..##", ".##..##", ".##..##", ".##..##", ".##.##.", "#####.."],
    "E": ["#######", ".##...#", ".##....", ".##..#.", ".#####.", ".##..#.", ".##....", ".##...#", "#######"],
    "F": ["#######", ".##...#", ".##....", ".##..#.", ".#####.", ".##..#.", ".##....", ".##....", "####..."],
    "G": ["..#####", ".##...#", "##.....", "##.....", "##..###", "##...##", "##...##", ".##..##", "..####."],
    "H": ["###.###", ".##..#.", ".##..#.", ".##..#.", ".######", ".##..#.", ".##..#.", ".##..#.", "###.###"],
    "I": ["####", ".##.", ".##.", ".##.", ".##.", ".##.", ".##.", ".##.", "####"],
    "J": ["..####", "...##.", "...##.", "...##.", "...##.", "...##.", "#..##.", "##.##.", ".###.."],
    "K": ["###.###", ".##..#.", ".##.#..", ".####..", ".###...", ".####..", ".##.##.", ".##..##", "###.###"],
    "L": ["####...", ".##....", ".##....", ".##....", ".##....", ".##....", ".##....", ".##...#", "#######"],
    "M": ["##....##", ".##..##.", ".###.##.", ".#.##.#.", ".#.##.#.", ".#....#.", ".#....#.", ".#....#.", "###..###"],
    "N": ["##...###", ".##...#.", ".###..#.", ".#.##.#.", ".#..###.", ".#...##.", ".#....#.", ".#....#.", "###...#."],
    "O": ["..###..", ".##..#.", "##....#", "##....#", "##....#", "##....#", "##....#", ".##..#.", "..###.."],
    "P": ["######.", ".##..##", ".##..##", ".##..##", ".#####.", ".##....", ".##....", ".##....", "####..."],
    "Q": ["..###..", ".##..#.", "##....#", "##....#", "##....#", "##..#.#", "##...##", ".##..#.", "..###.#"],
    "R": ["######.", ".##..##", ".##..##", ".##..##", ".#####.", ".####..", ".##.##.", ".##..##", "###..##"],
    "S": [".#####.", "##...##", "##.....", ".###...", "...###.", ".....##", ".....##", "##...##", ".#####."],
    "T": ["#######", "#..##.#", "...##..", "...##..", "...##..", "...##..", "...##..", "...##..", "..####."],
    "U": ["###.###", ".##..#.", ".##..#.", ".##..#.", ".##..#.", ".##..#.", ".##..#.", ".##..#.", "..###.."],
    "V": ["###..###", ".##...#.", ".##...#.", "..##.#..", "..##.#..", "..##.#..", "...###..", "...##...", "...#...."],
    "W": ["###.#.###", ".##.#..#.", ".##.#..#.", ".##.##.#.", ".##.##.#.", "..#####..", "..##.##..", "..#...#..", "..#...#.."],
    "X": ["###..###", ".##...#.", "..##.#..", "...##...", "...##...", "..#.##..", ".#...##.", ".#...##.", "###.####"],
    "Y": ["###..###", ".##...#.", "..##.#..", "...###..", "...##...", "...##...", "...##...", "...##...", "..####.."],
    "Z": ["########", "#....##.", "....##..", "...##...", "..##....", ".##.....", "##......", "##.....#", "########"],
}

STYLES = {"block": BLOCK, "serif": SERIF}


def main():
    for name, font in STYLES.items():
        glyphs = {label: BinaryImage.from_rows(rows) for label, rows in font.items()}
        tset = build_set(name, glyphs, bias=0.4, canvas=(64, 64), margin=4)
        save_set(tset, OUT / name)
        print(f"{name}: {len(tset)} glyphs -> {OUT / name}")


if __name__ == "__main__":
    main()
